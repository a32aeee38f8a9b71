#pragma once

// JSON problem specs in, multi-route evaluation with cross-checks, reports out.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "haarint/char_sums.hpp"
#include "haarint/closed_form.hpp"
#include "haarint/integrated_pfaffian.hpp"
#include "haarint/monte_carlo.hpp"
#include "haarint/sampling.hpp"
#include "haarint/version.hpp"

namespace haarint {

using json = nlohmann::ordered_json;

// Malformed or self-contradictory problem description; the CLI maps this to exit 2.
struct SpecError : Error {
    using Error::Error;
};

enum class IntegralId { zis1, zis2, zfh1, zfh2, cor_tw, fh_standard, jis, jfh };

inline const char* to_string(IntegralId id) {
    switch (id) {
        case IntegralId::zis1: return "zis1";
        case IntegralId::zis2: return "zis2";
        case IntegralId::zfh1: return "zfh1";
        case IntegralId::zfh2: return "zfh2";
        case IntegralId::cor_tw: return "cor_tw";
        case IntegralId::fh_standard: return "fh_standard";
        case IntegralId::jis: return "jis";
    }
    return "jfh";
}

inline IntegralId integral_from_string(const std::string& s) {
    if (s == "zis1") return IntegralId::zis1;
    if (s == "zis2") return IntegralId::zis2;
    if (s == "zfh1") return IntegralId::zfh1;
    if (s == "zfh2") return IntegralId::zfh2;
    if (s == "cor_tw") return IntegralId::cor_tw;
    if (s == "fh_standard") return IntegralId::fh_standard;
    if (s == "jis") return IntegralId::jis;
    if (s == "jfh") return IntegralId::jfh;
    throw SpecError("unknown integral id: " + s);
}

// How many matrices the Monte Carlo route consumes.
inline int matrix_count(IntegralId id) {
    switch (id) {
        case IntegralId::zis2:
        case IntegralId::zfh2: return 4;
        case IntegralId::cor_tw:
        case IntegralId::fh_standard: return 0;
        default: return 2;
    }
}

inline int spectrum_count(IntegralId id) {
    switch (id) {
        case IntegralId::zis2:
        case IntegralId::zfh2: return 2;
        case IntegralId::cor_tw:
        case IntegralId::fh_standard: return 0;
        default: return 1;
    }
}

inline bool uses_beta(IntegralId id) {
    return id == IntegralId::zfh1 || id == IntegralId::zfh2 ||
           id == IntegralId::fh_standard || id == IntegralId::jfh;
}

inline std::vector<std::string> allowed_routes(IntegralId id) {
    switch (id) {
        case IntegralId::fh_standard:
        case IntegralId::jis:
        case IntegralId::jfh: return {"closed", "mc"};
        default: return {"closed", "charsum", "mc"};
    }
}

struct GeneratorSpec {
    std::uint64_t seed = 1;
    double rho = 0.5;
};

struct ProblemSpec {
    IntegralId integral = IntegralId::zis1;
    int n = 0;  // 0 = infer from the source
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};
    Complex b{0.0, 0.0};  // scalar source strength (cor_tw)
    int sign = 1;         // cor_tw: +1 or -1
    std::string variant;  // evaluator-specific; empty selects the default form
    KernelArg kernel_arg = KernelArg::standard;
    Normalization normalization = Normalization::unit_mean;
    std::vector<ComplexMatrix> matrices;
    std::vector<std::vector<Complex>> spectra;
    std::optional<GeneratorSpec> generator;
    std::vector<std::string> routes;
    long mc_samples = 100000;
    std::uint64_t mc_seed = 1;
};

// ---------------------------------------------------------------------------
// JSON conversions. Complex numbers travel as [re, im]; bare numbers are
// accepted on input as purely real. Matrices are row-major nested arrays.

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw SpecError(where + ": expected a number or [re, im]");
}

inline json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw SpecError(where + ": expected an array of rows");
    const int n = static_cast<int>(j.size());
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
            throw SpecError(where + ": matrices must be square; row " + std::to_string(r) +
                            " has the wrong length");
        for (int c = 0; c < n; ++c) m(r, c) = complex_from_json(j[r][c], where);
    }
    return m;
}

inline json spectrum_values_to_json(const std::vector<Complex>& v) {
    json a = json::array();
    for (Complex z : v) a.push_back(complex_to_json(z));
    return a;
}

namespace hdetail {

inline bool is_integer_exponent(Complex z) { return detail::is_real_integer(z); }

inline long read_positive_long(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() <= 0)
        throw SpecError(where + ": expected a positive integer");
    return static_cast<long>(j.get<long long>());
}

inline std::uint64_t read_seed(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw SpecError(where + ": expected a non-negative integer");
    return static_cast<std::uint64_t>(j.get<long long>());
}

}  // namespace hdetail

inline ProblemSpec parse_problem_spec(const json& j) {
    if (!j.is_object()) throw SpecError("problem spec must be a JSON object");
    static const std::set<std::string> known = {
        "integral", "N",        "alpha",  "beta",       "b",
        "sign",     "variant",  "kernel_arg",           "normalization",
        "matrices", "spectra",  "generator",            "routes",
        "mc_samples", "mc_seed"};
    for (const auto& item : j.items())
        if (!known.count(item.key())) throw SpecError("unknown key in problem spec: " + item.key());
    if (!j.contains("integral") || !j["integral"].is_string())
        throw SpecError("problem spec needs a string field \"integral\"");

    ProblemSpec ps;
    ps.integral = integral_from_string(j["integral"].get<std::string>());
    const IntegralId id = ps.integral;

    if (j.contains("alpha")) ps.alpha = complex_from_json(j["alpha"], "alpha");
    if (j.contains("beta")) {
        if (!uses_beta(id))
            throw SpecError(std::string("integral ") + to_string(id) + " takes no beta exponent");
        ps.beta = complex_from_json(j["beta"], "beta");
    }
    if (j.contains("b")) {
        if (id != IntegralId::cor_tw) throw SpecError("field \"b\" applies only to cor_tw");
        ps.b = complex_from_json(j["b"], "b");
    }
    if (j.contains("sign")) {
        if (id != IntegralId::cor_tw) throw SpecError("field \"sign\" applies only to cor_tw");
        if (!j["sign"].is_number_integer() || std::abs(j["sign"].get<int>()) != 1)
            throw SpecError("sign must be +1 or -1");
        ps.sign = j["sign"].get<int>();
    }

    if (j.contains("variant")) {
        if (!j["variant"].is_string()) throw SpecError("variant must be a string");
        ps.variant = j["variant"].get<std::string>();
        const std::string& v = ps.variant;
        bool ok = false;
        if (id == IntegralId::zis1 || id == IntegralId::zfh1)
            ok = (v == "constant" || v == "shifted");
        else if (id == IntegralId::fh_standard)
            ok = (v == "binom_det" || v == "barnes_g");
        if (!ok)
            throw SpecError("variant \"" + v + "\" is not valid for " + to_string(id));
    }
    if (j.contains("kernel_arg")) {
        if (id != IntegralId::jis) throw SpecError("kernel_arg applies only to jis");
        const std::string v = j["kernel_arg"].get<std::string>();
        if (v == "standard") ps.kernel_arg = KernelArg::standard;
        else if (v == "offset_by_one") ps.kernel_arg = KernelArg::offset_by_one;
        else throw SpecError("kernel_arg must be \"standard\" or \"offset_by_one\"");
    }
    if (j.contains("normalization")) {
        const std::string v = j["normalization"].get<std::string>();
        if (v == "unit_mean") ps.normalization = Normalization::unit_mean;
        else if (v == "two_pi_n" || v == "paper") ps.normalization = Normalization::two_pi_n;
        else throw SpecError("normalization must be \"unit_mean\" or \"two_pi_n\"");
        if (ps.normalization == Normalization::two_pi_n && id != IntegralId::cor_tw &&
            id != IntegralId::fh_standard)
            throw SpecError("two_pi_n normalization applies only to cor_tw and fh_standard");
    }

    const int want_matrices = matrix_count(id);
    int given = 0;
    if (j.contains("matrices")) {
        ++given;
        const json& arr = j["matrices"];
        if (!arr.is_array() || static_cast<int>(arr.size()) != want_matrices)
            throw SpecError(std::string(to_string(id)) + " needs exactly " +
                            std::to_string(want_matrices) + " matrices");
        for (int k = 0; k < want_matrices; ++k)
            ps.matrices.push_back(matrix_from_json(arr[k], "matrices[" + std::to_string(k) + "]"));
        for (const auto& m : ps.matrices)
            if (m.rows() != ps.matrices[0].rows())
                throw SpecError("all matrices must share one dimension");
    }
    if (j.contains("spectra")) {
        ++given;
        const json& arr = j["spectra"];
        const int want = spectrum_count(id);
        if (!arr.is_array() || static_cast<int>(arr.size()) != want)
            throw SpecError(std::string(to_string(id)) + " needs exactly " + std::to_string(want) +
                            " spectra");
        for (int k = 0; k < want; ++k) {
            if (!arr[k].is_array() || arr[k].empty())
                throw SpecError("each spectrum must be a non-empty array");
            std::vector<Complex> vals;
            for (const auto& e : arr[k])
                vals.push_back(complex_from_json(e, "spectra[" + std::to_string(k) + "]"));
            ps.spectra.push_back(std::move(vals));
        }
        if (ps.spectra.size() == 2 && ps.spectra[0].size() != ps.spectra[1].size())
            throw SpecError("the two spectra must have equal length");
    }
    if (j.contains("generator")) {
        ++given;
        const json& g = j["generator"];
        if (!g.is_object()) throw SpecError("generator must be an object");
        GeneratorSpec gs;
        for (const auto& item : g.items())
            if (item.key() != "seed" && item.key() != "rho")
                throw SpecError("unknown generator key: " + item.key());
        if (g.contains("seed")) gs.seed = hdetail::read_seed(g["seed"], "generator.seed");
        if (g.contains("rho")) {
            if (!g["rho"].is_number()) throw SpecError("generator.rho must be a number");
            gs.rho = g["rho"].get<double>();
        }
        if (!(gs.rho > 0.0) || gs.rho > 1.0)
            throw SpecError("generator.rho must lie in (0, 1]");
        const bool noninteger = !hdetail::is_integer_exponent(ps.alpha) ||
                                (uses_beta(id) && !hdetail::is_integer_exponent(ps.beta));
        if (noninteger && gs.rho >= 1.0)
            throw SpecError("generator.rho must be < 1 when an exponent is not an integer");
        ps.generator = gs;
    }

    if (want_matrices == 0) {
        if (given != 0)
            throw SpecError(std::string(to_string(id)) + " takes scalar parameters, not a source");
        if (!j.contains("N")) throw SpecError(std::string(to_string(id)) + " requires \"N\"");
    } else if (given != 1) {
        throw SpecError("exactly one of matrices, spectra, generator must be given");
    }

    if (j.contains("N")) {
        if (!j["N"].is_number_integer() || j["N"].get<int>() < 1)
            throw SpecError("N must be a positive integer");
        ps.n = j["N"].get<int>();
    }
    if (!ps.matrices.empty()) {
        const int n = ps.matrices[0].rows();
        if (ps.n != 0 && ps.n != n) throw SpecError("N disagrees with the matrix dimension");
        ps.n = n;
    }
    if (!ps.spectra.empty()) {
        const int n = static_cast<int>(ps.spectra[0].size());
        if (ps.n != 0 && ps.n != n) throw SpecError("N disagrees with the spectrum length");
        ps.n = n;
    }
    if (ps.generator && ps.n == 0)
        throw SpecError("generator sources need \"N\" for the matrix dimension");
    if (ps.n < 1) throw SpecError("could not determine N");
    if (ps.n > 64) throw SpecError("N is capped at 64");

    if (j.contains("routes")) {
        if (!j["routes"].is_array() || j["routes"].empty())
            throw SpecError("routes must be a non-empty array of route names");
        const auto allowed = allowed_routes(id);
        for (const auto& r : j["routes"]) {
            if (!r.is_string()) throw SpecError("route names must be strings");
            const std::string name = r.get<std::string>();
            if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
                throw SpecError("route \"" + name + "\" is not available for " + to_string(id));
            if (std::find(ps.routes.begin(), ps.routes.end(), name) == ps.routes.end())
                ps.routes.push_back(name);
        }
    } else {
        ps.routes = allowed_routes(id);
    }

    if (j.contains("mc_samples"))
        ps.mc_samples = hdetail::read_positive_long(j["mc_samples"], "mc_samples");
    if (j.contains("mc_seed")) ps.mc_seed = hdetail::read_seed(j["mc_seed"], "mc_seed");
    return ps;
}

// ---------------------------------------------------------------------------
// Source resolution: every run ends up with the spectra the series/determinant
// routes consume and the matrices the Monte Carlo route consumes, whichever
// way the problem was posed.

struct ResolvedSource {
    std::vector<Spectrum> spectra;
    std::vector<ComplexMatrix> matrices;
    json provenance = json::object();
};

namespace hdetail {

inline ComplexMatrix haar_from_stream(int n, RngStream& rng) {
    HaarSampler s(n);
    ComplexMatrix u(n, n);
    s.sample(rng, u);
    return u;
}

// (A, D) with eig(AD) = mu2 exactly. The scale split keeps both operator
// norms at sqrt(max |mu2|) so the branch constraint ||D|| <= 1 holds whenever
// the spectrum sits inside the unit disc.
inline std::pair<ComplexMatrix, ComplexMatrix> pair_from_spectrum(
    const std::vector<Complex>& mu2, RngStream& rng) {
    const int n = static_cast<int>(mu2.size());
    double top = 0.0;
    for (Complex z : mu2) top = std::max(top, std::abs(z));
    const double s = std::clamp(std::sqrt(top), 1e-4, 1.0);
    ComplexMatrix q1 = haar_from_stream(n, rng);
    ComplexMatrix q2 = haar_from_stream(n, rng);
    ComplexMatrix diag(n, n);
    for (int i = 0; i < n; ++i) diag(i, i) = mu2[i] / s;
    ComplexMatrix a = q1 * diag * q2.adjoint();
    ComplexMatrix d = Complex(s) * (q2 * q1.adjoint());
    return {std::move(a), std::move(d)};
}

inline std::pair<ComplexMatrix, ComplexMatrix> integrated_pair_from_spectrum(
    const std::vector<Complex>& a2, RngStream& rng) {
    const int n = static_cast<int>(a2.size());
    ComplexMatrix q = haar_from_stream(n, rng);
    ComplexMatrix diag(n, n);
    for (int i = 0; i < n; ++i) diag(i, i) = a2[i];
    return {q * diag * q.adjoint(), ComplexMatrix::identity(n)};
}

inline Spectrum product_spectrum(const ComplexMatrix& x, const ComplexMatrix& y) {
    return make_spectrum(eigenvalues(x * y));
}

}  // namespace hdetail

inline ResolvedSource resolve_source(const ProblemSpec& ps) {
    ResolvedSource src;
    const IntegralId id = ps.integral;
    const int nm = matrix_count(id);
    if (nm == 0) {
        src.provenance["mode"] = "scalar";
        return src;
    }

    if (!ps.matrices.empty()) {
        src.matrices = ps.matrices;
        src.provenance["mode"] = "matrices";
    } else if (ps.generator) {
        std::vector<ComplexMatrix> ms;
        for (int k = 0; k < nm; ++k) {
            RngStream rng(ps.generator->seed, static_cast<std::uint64_t>(k));
            ms.push_back(gen_matrix(ps.n, ps.generator->rho, rng));
        }
        src.matrices = std::move(ms);
        src.provenance["mode"] = "generator";
        src.provenance["seed"] = ps.generator->seed;
        src.provenance["rho"] = ps.generator->rho;
    } else {
        // Spectra given: synthesize matrices for the sampling route from a
        // pinned stream so reports stay reproducible.
        RngStream rng(0x9e3779b97f4a7c15ull ^ ps.mc_seed, 1);
        if (nm == 2) {
            auto pr = (id == IntegralId::jis || id == IntegralId::jfh)
                          ? hdetail::integrated_pair_from_spectrum(ps.spectra[0], rng)
                          : hdetail::pair_from_spectrum(ps.spectra[0], rng);
            src.matrices = {std::move(pr.first), std::move(pr.second)};
        } else {
            auto ad = hdetail::pair_from_spectrum(ps.spectra[0], rng);
            auto bc = hdetail::pair_from_spectrum(ps.spectra[1], rng);
            src.matrices = {std::move(ad.first), std::move(bc.first), std::move(bc.second),
                            std::move(ad.second)};
        }
        src.provenance["mode"] = "spectra";
    }

    if (!ps.spectra.empty()) {
        for (const auto& vals : ps.spectra) src.spectra.push_back(make_spectrum(vals));
    } else if (nm == 2) {
        src.spectra.push_back(hdetail::product_spectrum(src.matrices[0], src.matrices[1]));
    } else {
        src.spectra.push_back(hdetail::product_spectrum(src.matrices[0], src.matrices[3]));
        src.spectra.push_back(hdetail::product_spectrum(src.matrices[1], src.matrices[2]));
    }

    json spectra_j = json::array();
    for (const auto& s : src.spectra) spectra_j.push_back(spectrum_values_to_json(s.values));
    src.provenance["spectra"] = std::move(spectra_j);
    return src;
}

// ---------------------------------------------------------------------------
// Route evaluation.

inline json diagnostics_to_json(const Diagnostics& d) {
    json j = json::object();
    if (!d.normalization.empty()) j["normalization"] = d.normalization;
    if (d.truncation_cutoff >= 0) j["truncation_cutoff"] = d.truncation_cutoff;
    if (d.terms_used >= 0) j["terms_used"] = d.terms_used;
    if (d.tail_estimate >= 0.0) j["tail_estimate"] = d.tail_estimate;
    j["clustered"] = d.clustered;
    if (d.condition_log10 != 0.0) j["condition_log10"] = d.condition_log10;
    if (d.quadrature_order > 0) {
        j["quadrature_order"] = d.quadrature_order;
        j["quadrature_check"] = d.quadrature_check;
    }
    if (d.flagged_regime) j["flagged_regime"] = true;
    if (!d.notes.empty()) j["notes"] = d.notes;
    return j;
}

namespace hdetail {

inline closed::ArgStyle is1_style(const std::string& variant) {
    return variant == "shifted" ? closed::ArgStyle::shifted : closed::ArgStyle::constant;
}

inline closed::ArgStyle fh1_style(const std::string& variant) {
    return variant == "constant" ? closed::ArgStyle::constant : closed::ArgStyle::shifted;
}

inline EvalResult eval_closed(const ProblemSpec& ps, const ResolvedSource& src) {
    switch (ps.integral) {
        case IntegralId::zis1:
            return closed::ingham_siegel_1(src.spectra[0], ps.alpha, is1_style(ps.variant));
        case IntegralId::zis2:
            return closed::ingham_siegel_2(src.spectra[0], src.spectra[1], ps.alpha);
        case IntegralId::zfh1:
            return closed::fisher_hartwig_1(src.spectra[0], ps.alpha, ps.beta,
                                            fh1_style(ps.variant));
        case IntegralId::zfh2:
            return closed::fisher_hartwig_2(src.spectra[0], src.spectra[1], ps.alpha, ps.beta);
        case IntegralId::cor_tw:
            return closed::toeplitz_scalar(ps.n, ps.alpha, ps.b, ps.sign, ps.normalization);
        case IntegralId::fh_standard:
            return closed::fisher_hartwig_standard(
                ps.n, ps.alpha, ps.beta,
                ps.variant == "barnes_g" ? closed::FhStandardVariant::barnes_g
                                         : closed::FhStandardVariant::binom_det,
                ps.normalization);
        case IntegralId::jis: {
            PfaffianRouteOptions opt;
            opt.is_arg = ps.kernel_arg;
            return integrated_ingham_siegel(src.spectra[0], ps.alpha, opt);
        }
        case IntegralId::jfh:
            return integrated_fisher_hartwig(src.spectra[0], ps.alpha, ps.beta);
    }
    throw SpecError("unreachable integral id");
}

inline EvalResult eval_charsum(const ProblemSpec& ps, const ResolvedSource& src) {
    switch (ps.integral) {
        case IntegralId::zis1:
            return charsum::ingham_siegel_1(src.spectra[0], ps.alpha);
        case IntegralId::zis2:
            return charsum::ingham_siegel_2(src.spectra[0], src.spectra[1], ps.alpha);
        case IntegralId::zfh1:
            return charsum::fisher_hartwig_1(src.spectra[0], ps.alpha, ps.beta);
        case IntegralId::zfh2:
            return charsum::fisher_hartwig_2(src.spectra[0], src.spectra[1], ps.alpha, ps.beta);
        case IntegralId::cor_tw: {
            const Complex mu = ps.b * static_cast<double>(ps.sign);
            return charsum::ingham_siegel_1(
                make_spectrum(std::vector<Complex>(static_cast<size_t>(ps.n), mu)), ps.alpha);
        }
        default:
            throw SpecError("no series route for this integral");
    }
}

inline McEstimate eval_mc(const ProblemSpec& ps, const ResolvedSource& src) {
    McOptions opt;
    opt.seed = ps.mc_seed;
    const auto& m = src.matrices;
    switch (ps.integral) {
        case IntegralId::zis1:
            return mc::ingham_siegel_1(m[0], m[1], ps.alpha, ps.mc_samples, opt);
        case IntegralId::zis2:
            return mc::ingham_siegel_2(m[0], m[1], m[2], m[3], ps.alpha, ps.mc_samples, opt);
        case IntegralId::zfh1:
            return mc::fisher_hartwig_1(m[0], m[1], ps.alpha, ps.beta, ps.mc_samples, opt);
        case IntegralId::zfh2:
            return mc::fisher_hartwig_2(m[0], m[1], m[2], m[3], ps.alpha, ps.beta, ps.mc_samples,
                                        opt);
        case IntegralId::cor_tw:
            return mc::ingham_siegel_1(ComplexMatrix::scalar(ps.n, ps.b),
                                       ComplexMatrix::scalar(ps.n, static_cast<double>(ps.sign)),
                                       ps.alpha, ps.mc_samples, opt);
        case IntegralId::fh_standard:
            return mc::fisher_hartwig_1(ComplexMatrix::identity(ps.n),
                                        ComplexMatrix::identity(ps.n), ps.alpha, ps.beta,
                                        ps.mc_samples, opt);
        case IntegralId::jis:
            return mc::integrated_is(m[0], m[1], ps.alpha, ps.mc_samples, opt);
        case IntegralId::jfh:
            return mc::integrated_fh(m[0], m[1], ps.alpha, ps.beta, ps.mc_samples, opt);
    }
    throw SpecError("unreachable integral id");
}

inline std::string timestamp_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace hdetail

// Agreement gates for the cross-checks the harness runs automatically.
inline constexpr double kDeterministicRelTol = 1e-8;
inline constexpr double kMcSigmaGate = 4.0;
inline constexpr double kMcAbsoluteFloor = 1e-12;

struct RouteRecord {
    std::string name;
    bool ok = false;
    bool statistical = false;
    Complex value;
    double std_error = -1.0;
    std::string error;
    json detail = json::object();
};

struct RunOutcome {
    json report;
    bool pass = false;
};

inline RunOutcome run_problem(const ProblemSpec& ps) {
    const ResolvedSource src = resolve_source(ps);
    // All routes are computed against the unit-mean measure and rescaled
    // together, so cross-checks never mix normalizations.
    const double scale = ps.normalization == Normalization::two_pi_n
                             ? std::pow(6.283185307179586476925287, -ps.n)
                             : 1.0;

    std::vector<RouteRecord> recs;
    for (const std::string& name : ps.routes) {
        RouteRecord rec;
        rec.name = name;
        try {
            if (name == "closed") {
                const EvalResult e = hdetail::eval_closed(ps, src);
                rec.value = e.value;  // normalization already applied internally
                rec.detail = diagnostics_to_json(e.diag);
                rec.ok = true;
            } else if (name == "charsum") {
                const EvalResult e = hdetail::eval_charsum(ps, src);
                rec.value = e.value * scale;
                rec.detail = diagnostics_to_json(e.diag);
                rec.ok = true;
            } else {
                const McEstimate e = hdetail::eval_mc(ps, src);
                rec.value = e.mean * scale;
                rec.std_error = e.std_error * scale;
                rec.statistical = true;
                rec.detail["samples"] = e.n_samples;
                rec.detail["flagged"] = e.flagged;
                if (!e.notes.empty()) rec.detail["notes"] = e.notes;
                rec.ok = true;
            }
        } catch (const SpecError&) {
            throw;
        } catch (const Error& err) {
            rec.error = err.what();
        }
        recs.push_back(std::move(rec));
    }

    json routes_j = json::object();
    for (const RouteRecord& r : recs) {
        json e = json::object();
        e["ok"] = r.ok;
        if (r.ok) {
            e["value"] = complex_to_json(r.value);
            if (r.statistical) e["std_error"] = r.std_error;
        } else {
            e["error"] = r.error;
        }
        for (const auto& item : r.detail.items()) e[item.key()] = item.value();
        routes_j[r.name] = std::move(e);
    }

    json checks = json::array();
    bool all_pass = true;
    for (const RouteRecord& r : recs)
        if (!r.ok) all_pass = false;
    for (size_t i = 0; i < recs.size(); ++i) {
        for (size_t k = i + 1; k < recs.size(); ++k) {
            const RouteRecord& a = recs[i];
            const RouteRecord& b = recs[k];
            if (!a.ok || !b.ok) continue;
            if (a.statistical && b.statistical) continue;
            json c = json::object();
            c["pair"] = json::array({a.name, b.name});
            const double diff = std::abs(a.value - b.value);
            bool pass = false;
            if (!a.statistical && !b.statistical) {
                const double mag = std::max(std::abs(a.value), std::abs(b.value));
                const double rel = mag > 0.0 ? diff / mag : 0.0;
                c["kind"] = "relative";
                c["discrepancy"] = rel;
                c["tolerance"] = kDeterministicRelTol;
                pass = rel <= kDeterministicRelTol;
            } else {
                const RouteRecord& det = a.statistical ? b : a;
                const RouteRecord& mc = a.statistical ? a : b;
                const double gate = std::max(kMcSigmaGate * mc.std_error,
                                             kMcAbsoluteFloor * (1.0 + std::abs(det.value)));
                c["kind"] = "mc_sigma";
                c["discrepancy"] = diff;
                c["std_error"] = mc.std_error;
                c["tolerance"] = gate;
                c["sigma"] = mc.std_error > 0.0 ? diff / mc.std_error : 0.0;
                pass = diff <= gate;
            }
            c["pass"] = pass;
            if (!pass) all_pass = false;
            checks.push_back(std::move(c));
        }
    }

    json rep = json::object();
    rep["tool"] = "haarint";
    rep["version"] = version_string;
    rep["timestamp"] = hdetail::timestamp_utc();
    rep["integral"] = to_string(ps.integral);
    rep["n"] = ps.n;
    json params = json::object();
    params["alpha"] = complex_to_json(ps.alpha);
    if (uses_beta(ps.integral)) params["beta"] = complex_to_json(ps.beta);
    if (ps.integral == IntegralId::cor_tw) {
        params["b"] = complex_to_json(ps.b);
        params["sign"] = ps.sign;
    }
    if (!ps.variant.empty()) params["variant"] = ps.variant;
    if (ps.integral == IntegralId::jis)
        params["kernel_arg"] =
            ps.kernel_arg == KernelArg::standard ? "standard" : "offset_by_one";
    rep["parameters"] = std::move(params);
    rep["normalization"] = to_string(ps.normalization);
    rep["mc_samples"] = ps.mc_samples;
    rep["mc_seed"] = ps.mc_seed;
    rep["sources"] = src.provenance;
    rep["routes"] = std::move(routes_j);
    rep["checks"] = std::move(checks);
    rep["pass"] = all_pass;

    return RunOutcome{std::move(rep), all_pass};
}

// CSV view of the report: one row per route value, one per cross-check.
inline std::string csv_from_report(const json& rep) {
    std::ostringstream out;
    out.precision(17);
    out << "type,name,value_re,value_im,std_error,discrepancy,tolerance,pass\n";
    if (rep.contains("routes"))
        for (const auto& item : rep["routes"].items()) {
            const json& r = item.value();
            out << "route," << item.key() << ",";
            if (r.value("ok", false)) {
                out << r["value"][0].get<double>() << "," << r["value"][1].get<double>() << ",";
                if (r.contains("std_error")) out << r["std_error"].get<double>();
                out << ",,," << "ok";
            } else {
                out << ",,,,," << "error";
            }
            out << "\n";
        }
    if (rep.contains("checks"))
        for (const json& c : rep["checks"]) {
            out << "check," << c["pair"][0].get<std::string>() << "|"
                << c["pair"][1].get<std::string>() << ",,,";
            if (c.contains("std_error")) out << c["std_error"].get<double>();
            out << "," << c["discrepancy"].get<double>() << "," << c["tolerance"].get<double>()
                << "," << (c["pass"].get<bool>() ? "pass" : "fail") << "\n";
        }
    return out.str();
}

}  // namespace haarint
