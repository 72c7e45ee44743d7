// twomode_jcx: spectra, diagonalization, verification and wavefunction samples
// for the two-mode JC-AJC and JC-JC models.

#include "twomode_jc.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

using namespace twomode_jc;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string model;  // jc-ajc by default; verify runs both models unless one is named
    std::string special;
    double f_re = 2.0, f_im = 0.0, g_re = 1.0, g_im = 0.0;
    double omega = 0.1, omega1 = 0.5, omega2 = 1.0, phase = 0.0;
    double mc2 = 1.0, hbar = 1.0;
    int cutoff = 200;
    std::string sectors = "auto";
    int nmax = 5, mmax = 0, count = 10;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;
    bool timing = false;
    // wavefunction / coherent-state
    int nl = 0, mn = 0;
    double zeta_re = 0.0, zeta_im = 0.0;
    bool zeta_given = false;
    bool closed = false;
    bool printed = false;
    int grid_rho = 100, grid_phi = 64;
    std::string algebra = "su11";
    std::string inner = "plus";
    std::vector<double> scales{1e4, 1e5, 1e6};
};

// ---------------------------------------------------------------------------
// Output

using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_finite(double v, const std::string& where) {
    if (!std::isfinite(v)) throw DomainError("non-finite value in " + where);
}

json to_json(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) {
        check_finite(*d, "output");
        return *d;
    }
    return std::get<long long>(c);
}

std::string to_csv(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) {
        check_finite(*d, "output");
        return fmt17(*d);
    }
    return std::to_string(std::get<long long>(c));
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = to_json(r[i]);
        rows.push_back(std::move(o));
    }
    return rows;
}

std::string table_csv(const Table& t, const std::vector<std::string>& footer = {}) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << to_csv(r[i]);
        os << '\n';
    }
    for (const auto& f : footer) os << "# " << f << '\n';
    return os.str();
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("cannot open output file " + o.out);
    f << text;
}

json header(const std::string& command) {
    json j = json::object();
    j["schema_version"] = 1;
    j["command"] = command;
    return j;
}

// ---------------------------------------------------------------------------
// Parameter resolution

struct Resolved {
    ModelKind kind = ModelKind::JC_AJC;
    ModelParams params;
    std::string label;
};

std::optional<SpecialCase> parse_case(const Options& o) {
    if (o.special.empty()) return std::nullopt;
    if (o.special == "dirac1p1") return SpecialCase::dirac1p1(o.omega);
    if (o.special == "dirac2p1") return SpecialCase::dirac2p1(o.omega);
    if (o.special == "ndpa") return SpecialCase::ndpa(o.omega1, o.omega2, o.phase);
    if (o.special == "coupled-osc") return SpecialCase::coupled_oscillators(o.omega1, o.omega2, o.phase);
    throw UsageError("unknown case " + o.special);
}

Resolved resolve(const Options& o) {
    ModelParams base;
    base.mc2 = o.mc2;
    base.hbar = o.hbar;
    Resolved r;
    if (const auto c = parse_case(o)) {
        const Preset pre = special_case_params(*c, base);
        r.kind = pre.kind;
        r.params = pre.params;
        r.label = o.special;
        return r;
    }
    r.kind = o.model == "jc-jc" ? ModelKind::JC_JC : ModelKind::JC_AJC;
    r.params = base;
    r.params.f = {o.f_re, o.f_im};
    r.params.g = {o.g_re, o.g_im};
    r.params.validate();
    r.label = to_string(r.kind);
    return r;
}

json params_json(const Resolved& r) {
    json j = json::object();
    j["model"] = to_string(r.kind);
    j["label"] = r.label;
    j["f"] = {r.params.f.real(), r.params.f.imag()};
    j["g"] = {r.params.g.real(), r.params.g.imag()};
    j["mc2"] = r.params.mc2;
    j["hbar"] = r.params.hbar;
    return j;
}

std::vector<int> parse_sectors(const Options& o, ModelKind k) {
    std::vector<int> s;
    if (o.sectors == "auto") {
        if (k == ModelKind::JC_AJC)
            for (int d = -3; d <= 3; ++d) s.push_back(d);
        else
            for (int n = 0; n <= std::min(o.cutoff, 10); ++n) s.push_back(n);
        return s;
    }
    std::stringstream ss(o.sectors);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            s.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("invalid sector value '" + item + "'");
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_spectrum(const Options& o) {
    const Resolved r = resolve(o);
    Table t{{"n_l", "m_n", "inner", "branch", "E", "kg"}, {}};
    for (int nl = 0; nl <= o.nmax; ++nl)
        for (int mn = 0; mn <= o.mmax; ++mn) {
            std::vector<InnerSign> inners{InnerSign::NA};
            if (r.kind == ModelKind::JC_JC && mn > 0) inners = {InnerSign::Plus, InnerSign::Minus};
            for (InnerSign in : inners)
                for (Branch b : {Branch::Plus, Branch::Minus}) {
                    EnergyLevel lv;
                    try {
                        lv = analytic_energy(r.kind, r.params, nl, mn, b, in);
                    } catch (const Error& e) {
                        throw DomainError("(n_l=" + std::to_string(nl) + ", m_n=" + std::to_string(mn) + "): " + e.what());
                    }
                    t.rows.push_back({(long long)nl, (long long)mn, std::string(to_string(lv.inner)),
                                      std::string(to_string(b)), lv.E, lv.kg});
                }
        }
    if (o.format == "csv") {
        emit(o, table_csv(t));
    } else {
        json j = header("spectrum");
        j["params"] = params_json(r);
        j["rows"] = table_json(t);
        emit(o, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_diagonalize(const Options& o) {
    if (o.cutoff < 4) throw UsageError("diagonalize needs --cutoff >= 4");
    if (o.count < 1) throw UsageError("--count must be positive");
    const Resolved r = resolve(o);
    if (r.kind == ModelKind::JC_AJC) tilting_parameters(r.kind, r.params);  // rejects |f| = |g|
    const auto sectors = parse_sectors(o, r.kind);
    const ChargeKind ck = charge_kind_of(r.kind);
    std::vector<NumericSpectrum> spectra(sectors.size());
    parallel_for(sectors.size(), [&](std::size_t i) {
        const int q = sectors[i];
        if (r.kind == ModelKind::JC_JC && (q < 0 || q > o.cutoff))
            throw DomainError("sector N_s=" + std::to_string(q) + " is outside [0, cutoff]");
        const std::size_t n = r.kind == ModelKind::JC_JC ? std::min<std::size_t>(o.count, q + 1) : o.count;
        const int cut = r.kind == ModelKind::JC_JC ? q : o.cutoff;
        spectra[i] = numeric_spectrum(r.kind, Component::Upper, r.params, make_sector(ck, q, cut), n, o.tol);
    });
    Table t{{"sector", "rank", "kg_numeric", "kg_analytic", "E", "rel_dev"}, {}};
    for (std::size_t i = 0; i < sectors.size(); ++i)
        for (std::size_t n = 0; n < spectra[i].values.size(); ++n) {
            const double num = spectra[i].values[n];
            const double ana = r.kind == ModelKind::JC_AJC
                                   ? sector_kg_su11(r.params, Component::Upper, sectors[i], static_cast<int>(n))
                                   : sector_kg_su2(r.params, Component::Upper, static_cast<int>(n));
            const double scale = std::max({std::abs(ana), r.params.hbar * r.params.hbar *
                                                              (std::norm(r.params.f) + std::norm(r.params.g)), 1e-300});
            t.rows.push_back({(long long)sectors[i], (long long)n, num, ana,
                              energy_from_kg(num, r.params, Branch::Plus), std::abs(num - ana) / scale});
        }
    if (o.format == "csv") {
        emit(o, table_csv(t));
    } else {
        json j = header("diagonalize");
        j["params"] = params_json(r);
        j["charge"] = to_string(ck);
        j["cutoff"] = o.cutoff;
        j["rows"] = table_json(t);
        emit(o, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_verify(const Options& o) {
    const Resolved r = resolve(o);
    VerifyConfig cfg;
    cfg.params = r.params;
    if (!o.special.empty() || (!o.model.empty() && o.model != "both")) cfg.model = r.kind;
    cfg.su11_cutoff = o.cutoff;
    cfg.seed = o.seed;
    const auto records = run_verification(cfg);
    const bool ok = all_passed(records);
    std::vector<std::string> cols{"name", "anchor", "computed", "reference", "residual", "tolerance", "status", "reason"};
    if (o.timing) cols.push_back("runtime_s");
    Table t{cols, {}};
    for (const auto& rec : records) {
        std::vector<Cell> row{rec.name, rec.anchor, rec.computed, rec.reference, rec.residual, rec.tolerance,
                              std::string(to_string(rec.status)), rec.reason};
        if (o.timing) row.push_back(rec.runtime_s);
        t.rows.push_back(std::move(row));
    }
    if (o.format == "csv") {
        emit(o, table_csv(t, {std::string("overall=") + (ok ? "PASS" : "FAIL")}));
    } else {
        json j = header("verify");
        j["params"] = params_json(r);
        j["seed"] = o.seed;
        j["records"] = table_json(t);
        j["passed"] = ok;
        emit(o, j.dump(2) + "\n");
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_wavefunction(const Options& o) {
    if (o.grid_rho < 1 || o.grid_phi < 1) throw UsageError("grid sizes must be positive");
    const cplx zeta{o.zeta_re, o.zeta_im};
    Wavefunction fn;
    double decay = 1.0;
    std::string kind = "oscillator";
    if (o.closed) {
        const auto cp = closed_form_params(zeta);
        const auto v = o.printed ? ClosedFormVariant::AsPrinted : ClosedFormVariant::Corrected;
        const int nl = o.nl, mn = o.mn;
        ncs_wavefunction_closed(cp, nl, mn, {1.0, 0.0}, v);  // validate before sampling
        fn = [cp, nl, mn, v](RadialPoint p) { return ncs_wavefunction_closed(cp, nl, mn, p, v); };
        decay = (1.0 - std::norm(zeta)) / std::norm(1.0 - zeta);
        kind = o.printed ? "closed-as-printed" : "closed";
    } else if (o.zeta_given) {
        auto w = std::make_shared<NcsWavefunction>(zeta, su11_labels({o.nl, o.mn}));
        decay = w->decay();
        fn = [w](RadialPoint p) { return (*w)(p); };
        kind = "coherent-series";
    } else {
        const int nl = o.nl, mn = o.mn;
        oscillator_wavefunction(nl, mn, {1.0, 0.0});
        fn = [nl, mn](RadialPoint p) { return oscillator_wavefunction(nl, mn, p); };
    }
    const auto& lr = gauss_laguerre_log(o.grid_rho);
    const auto& lp = gauss_legendre(o.grid_phi);
    Table t{{"rho", "phi", "re", "im", "abs2"}, {}};
    t.rows.reserve(static_cast<std::size_t>(o.grid_rho) * o.grid_phi);
    std::vector<cplx> vals(static_cast<std::size_t>(o.grid_rho) * o.grid_phi);
    parallel_for(static_cast<std::size_t>(o.grid_rho), [&](std::size_t i) {
        const double rho = std::sqrt(lr.nodes[i] / decay);
        for (int j = 0; j < o.grid_phi; ++j)
            vals[i * o.grid_phi + j] = fn({rho, kPi * (lp.nodes[j] + 1.0)});
    });
    double norm = 0.0;
    for (int i = 0; i < o.grid_rho; ++i) {
        const double rho = std::sqrt(lr.nodes[i] / decay);
        const double w = std::exp(lr.weights[i] + lr.nodes[i]) * kPi / (2.0 * decay);
        for (int j = 0; j < o.grid_phi; ++j) {
            const cplx v = vals[static_cast<std::size_t>(i) * o.grid_phi + j];
            norm += w * lp.weights[j] * std::norm(v);
            t.rows.push_back({rho, kPi * (lp.nodes[j] + 1.0), v.real(), v.imag(), std::norm(v)});
        }
    }
    if (o.format == "csv") {
        emit(o, table_csv(t, {"kind=" + kind, "n_l=" + std::to_string(o.nl) + " m_n=" + std::to_string(o.mn),
                              "zeta=" + fmt17(zeta.real()) + "," + fmt17(zeta.imag()),
                              "grid=" + std::to_string(o.grid_rho) + "x" + std::to_string(o.grid_phi),
                              "norm=" + fmt17(norm)}));
    } else {
        json j = header("wavefunction");
        j["kind"] = kind;
        j["n_l"] = o.nl;
        j["m_n"] = o.mn;
        j["zeta"] = {zeta.real(), zeta.imag()};
        j["grid"] = {o.grid_rho, o.grid_phi};
        j["norm"] = norm;
        j["samples"] = table_json(t);
        emit(o, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_coherent(const Options& o) {
    const Resolved r = resolve(o);
    const bool su11 = o.algebra == "su11";
    cplx zeta{o.zeta_re, o.zeta_im};
    if (!o.zeta_given) zeta = tilting_parameters(su11 ? ModelKind::JC_AJC : ModelKind::JC_JC, r.params).zeta;
    CoherentStateCoeffs c;
    json labels = json::object();
    if (su11) {
        const auto l = su11_labels({o.nl, o.mn});
        c = su11_ncs_coefficients(l.k, l.n, zeta, o.tol * o.tol);
        labels["k"] = l.k.value();
        labels["n"] = l.n;
    } else {
        const auto l = su2_labels({o.nl, o.mn});
        c = su2_ncs_coefficients(l.j, l.mu, zeta);
        labels["j"] = l.j.value();
        labels["mu"] = l.mu.value();
    }
    Table t{{su11 ? "n" : "mu", "re", "im", "abs2"}, {}};
    for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) {
        const cplx v = c.coeffs(i);
        const Cell idx = su11 ? Cell{(long long)i} : Cell{static_cast<double>(i) - c.su2.j.value()};
        t.rows.push_back({idx, v.real(), v.imag(), std::norm(v)});
    }
    if (o.format == "csv") {
        emit(o, table_csv(t, {"algebra=" + o.algebra, "zeta=" + fmt17(zeta.real()) + "," + fmt17(zeta.imag()),
                              "norm=" + fmt17(c.norm2()), "tail_bound=" + fmt17(c.tail_bound)}));
    } else {
        json j = header("coherent-state");
        j["algebra"] = o.algebra;
        j["labels"] = labels;
        j["zeta"] = {zeta.real(), zeta.imag()};
        j["norm"] = c.norm2();
        j["tail_bound"] = c.tail_bound;
        j["coefficients"] = table_json(t);
        emit(o, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_limits(const Options& o) {
    const std::string name = o.special.empty() ? "coupled-osc" : o.special;
    SpecialCase c;
    if (name == "ndpa")
        c = SpecialCase::ndpa(o.omega1, o.omega2, o.phase);
    else if (name == "coupled-osc")
        c = SpecialCase::coupled_oscillators(o.omega1, o.omega2, o.phase);
    else
        throw UsageError("limits needs --case ndpa or --case coupled-osc");
    const InnerSign in = o.inner == "minus" ? InnerSign::Minus : InnerSign::Plus;
    std::vector<LimitReport> reps;
    for (double s : o.scales) reps.push_back(nonrelativistic_limit_check(c, {o.nl, o.mn}, in, s, o.hbar));
    Table t{{"scale", "mc2", "eps_model", "eps_analytic", "offset", "rel_error"}, {}};
    for (const auto& r : reps) t.rows.push_back({r.scale, r.mc2, r.eps_model, r.eps_analytic, r.offset, r.rel_error});
    std::optional<double> slope;
    bool all_positive = reps.size() >= 2;
    for (const auto& r : reps) all_positive = all_positive && r.rel_error > 0.0;
    if (all_positive) slope = limit_decay_exponent(reps);
    if (o.format == "csv") {
        emit(o, table_csv(t, {"case=" + name, slope ? "slope=" + fmt17(*slope) : "slope=n/a"}));
    } else {
        json j = header("limits");
        j["case"] = name;
        j["n_l"] = o.nl;
        j["m_n"] = o.mn;
        j["rows"] = table_json(t);
        j["slope"] = slope ? json(*slope) : json(nullptr);
        emit(o, j.dump(2) + "\n");
    }
    return kExitOk;
}

void add_common(CLI::App* s, Options& o) {
    s->add_option("--model", o.model, "Model")->check(CLI::IsMember({"jc-ajc", "jc-jc", "both"}));
    s->add_option("--case", o.special, "Special-case preset")
        ->check(CLI::IsMember({"dirac1p1", "dirac2p1", "ndpa", "coupled-osc"}));
    s->add_option("--f-re", o.f_re);
    s->add_option("--f-im", o.f_im);
    s->add_option("--g-re", o.g_re);
    s->add_option("--g-im", o.g_im);
    s->add_option("--omega", o.omega, "Oscillator frequency for the Dirac presets");
    s->add_option("--omega1", o.omega1);
    s->add_option("--omega2", o.omega2);
    s->add_option("--phase", o.phase);
    s->add_option("--mc2", o.mc2);
    s->add_option("--hbar", o.hbar);
    s->add_option("--cutoff", o.cutoff)->check(CLI::NonNegativeNumber);
    s->add_option("--sector", o.sectors, "Comma-separated sector charges or 'auto'");
    s->add_option("--nmax", o.nmax);
    s->add_option("--mmax", o.mmax);
    s->add_option("--count", o.count);
    s->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed);
    s->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", o.out);
    s->add_flag("--timing", o.timing, "Include runtimes in the report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-mode Jaynes-Cummings / anti-Jaynes-Cummings Dirac models"};
    app.set_config("--config", "", "TOML configuration file");
    app.require_subcommand(1);
    Options o;

    auto* spectrum = app.add_subcommand("spectrum", "Analytic energy table");
    auto* diag = app.add_subcommand("diagonalize", "Numeric sector spectra against the analytic forms");
    auto* verify = app.add_subcommand("verify", "Run the verification suites");
    auto* wave = app.add_subcommand("wavefunction", "Sample a wavefunction on a quadrature grid");
    auto* coh = app.add_subcommand("coherent-state", "Number-coherent-state coefficients");
    auto* lim = app.add_subcommand("limits", "Non-relativistic limit sweep");
    for (auto* s : {spectrum, diag, verify, wave, coh, lim}) add_common(s, o);
    for (auto* s : {wave, coh, lim}) {
        s->add_option("--nl", o.nl)->check(CLI::NonNegativeNumber);
        s->add_option("--mn", o.mn)->check(CLI::NonNegativeNumber);
    }
    for (auto* s : {wave, coh}) {
        s->add_option("--zeta-re", o.zeta_re);
        s->add_option("--zeta-im", o.zeta_im);
    }
    wave->add_flag("--closed", o.closed, "Use the closed-form coherent wavefunction");
    wave->add_flag("--as-printed", o.printed, "Closed form with the printed Laguerre argument");
    wave->add_option("--grid-rho", o.grid_rho);
    wave->add_option("--grid-phi", o.grid_phi);
    coh->add_option("--algebra", o.algebra)->check(CLI::IsMember({"su11", "su2"}));
    lim->add_option("--inner", o.inner)->check(CLI::IsMember({"plus", "minus"}));
    lim->add_option("--scales", o.scales)->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    o.zeta_given = wave->count("--zeta-re") + wave->count("--zeta-im") + coh->count("--zeta-re") +
                       coh->count("--zeta-im") > 0;
    if (!o.zeta_given && o.closed) o.zeta_given = true;

    const auto t0 = std::chrono::steady_clock::now();
    int code = kExitOk;
    try {
        if (*spectrum) code = cmd_spectrum(o);
        else if (*diag) code = cmd_diagonalize(o);
        else if (*verify) code = cmd_verify(o);
        else if (*wave) code = cmd_wavefunction(o);
        else if (*coh) code = cmd_coherent(o);
        else if (*lim) code = cmd_limits(o);
    } catch (const NotConvergedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (o.timing)
        std::cerr << "elapsed_s " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << '\n';
    return code;
}
