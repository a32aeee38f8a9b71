// haarint: unitary-group matrix integrals evaluated by determinant, series,
// and sampling routes, with cross-checks. Exit codes: 0 all checks pass,
// 1 numeric failure, 2 malformed request.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "haarint/harness.hpp"
#include "haarint/verify.hpp"

namespace {

haarint::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw haarint::SpecError("cannot open " + path);
    try {
        return haarint::json::parse(in);
    } catch (const std::exception& e) {
        throw haarint::SpecError(std::string("JSON parse failure in ") + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw haarint::SpecError("cannot write " + path);
    out << text;
}

void emit(const haarint::json& rep, const std::string& out_path, const std::string& csv_path) {
    const std::string text = rep.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    if (!csv_path.empty()) write_text(csv_path, haarint::csv_from_report(rep));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unitary-group matrix integrals: closed forms, series, and Haar sampling"};
    app.require_subcommand(1);

    std::string eval_spec, eval_out, eval_csv;
    auto* eval = app.add_subcommand("eval", "evaluate a problem spec and cross-check its routes");
    eval->add_option("spec", eval_spec, "problem spec JSON file")->required();
    eval->add_option("-o,--output", eval_out, "write the report here instead of stdout");
    eval->add_option("--csv", eval_csv, "also export report tables as CSV");

    int gen_n = 2;
    double gen_rho = 0.5;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "draw a random matrix with a bounded operator norm");
    gen->add_option("--n", gen_n, "dimension")->required();
    gen->add_option("--rho", gen_rho, "operator norm bound in (0, 1]");
    gen->add_option("--seed", gen_seed, "stream seed");
    gen->add_option("-o,--output", gen_out, "write the matrix JSON here instead of stdout");

    std::string level = "quick", verify_out, verify_csv;
    auto* verify = app.add_subcommand("verify", "run the built-in cross-validation battery");
    verify->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    verify->add_option("-o,--output", verify_out, "write the report here instead of stdout");
    verify->add_option("--csv", verify_csv, "also export per-criterion rows as CSV");

    std::string mc_spec, mc_out;
    long mc_samples = 0;
    std::uint64_t mc_seed = 0;
    auto* mcs = app.add_subcommand("mc", "run only the sampling route of a problem spec");
    mcs->add_option("spec", mc_spec, "problem spec JSON file")->required();
    mcs->add_option("--samples", mc_samples, "override the sample count");
    mcs->add_option("--seed", mc_seed, "override the sampling seed");
    mcs->add_option("-o,--output", mc_out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*eval) {
            const haarint::ProblemSpec ps = haarint::parse_problem_spec(load_json(eval_spec));
            const haarint::RunOutcome out = haarint::run_problem(ps);
            emit(out.report, eval_out, eval_csv);
            return out.pass ? 0 : 1;
        }
        if (*gen) {
            if (gen_n < 1 || gen_n > 64) throw haarint::SpecError("gen: n must lie in 1..64");
            if (!(gen_rho > 0.0) || gen_rho > 1.0)
                throw haarint::SpecError("gen: rho must lie in (0, 1]");
            haarint::RngStream rng(gen_seed, 0);
            const haarint::ComplexMatrix m = haarint::gen_matrix(gen_n, gen_rho, rng);
            haarint::json j;
            j["n"] = gen_n;
            j["rho"] = gen_rho;
            j["seed"] = gen_seed;
            j["matrix"] = haarint::matrix_to_json(m);
            if (gen_out.empty())
                std::cout << j.dump(2) << "\n";
            else
                write_text(gen_out, j.dump(2) + "\n");
            return 0;
        }
        if (*verify) {
            const auto lv =
                level == "full" ? haarint::VerifyLevel::full : haarint::VerifyLevel::quick;
            const haarint::VerifyReport rep = haarint::verify_suite(
                lv, [](const haarint::CriterionResult& c) {
                    std::cerr << haarint::criterion_line(c) << std::endl;
                });
            const haarint::json j = haarint::verify_report_json(rep);
            if (verify_out.empty())
                std::cout << j.dump(2) << "\n";
            else
                write_text(verify_out, j.dump(2) + "\n");
            if (!verify_csv.empty()) {
                std::ostringstream csv;
                csv << "id,title,pass,items,failed,worst_rel,worst_sigma,seconds\n";
                csv.precision(17);
                for (const auto& c : rep.criteria)
                    csv << c.id << ",\"" << c.title << "\"," << (c.pass ? "pass" : "fail") << ","
                        << c.items << "," << c.failed << "," << c.worst_rel << ","
                        << c.worst_sigma << "," << c.seconds << "\n";
                write_text(verify_csv, csv.str());
            }
            return rep.pass ? 0 : 1;
        }
        // mc
        haarint::ProblemSpec ps = haarint::parse_problem_spec(load_json(mc_spec));
        ps.routes = {"mc"};
        if (mcs->count("--samples")) {
            if (mc_samples < 1) throw haarint::SpecError("mc: samples must be positive");
            ps.mc_samples = mc_samples;
        }
        if (mcs->count("--seed")) ps.mc_seed = mc_seed;
        const haarint::RunOutcome out = haarint::run_problem(ps);
        emit(out.report, mc_out, "");
        return out.pass ? 0 : 1;
    } catch (const haarint::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const haarint::Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
