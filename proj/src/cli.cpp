#include "gi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gi/errors.hpp"
#include "json.hpp"

namespace gi {

namespace {

using json = nlohmann::json;

const cplx kI{0.0, 1.0};

// Reads one JSON object and remembers which keys were looked at, so that
// finish() can reject everything else.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return j_.contains(key);
    }

    double number(const std::string& key, std::optional<double> def = std::nullopt) {
        if (!has(key)) return required(key, def);
        const json& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(where(key) + " must be finite");
        return d;
    }

    int integer(const std::string& key, std::optional<int> def = std::nullopt) {
        if (!has(key)) return required(key, def);
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
        return v.get<int>();
    }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(where(key) + " must be true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) {
        if (!has(key)) return required(key, def);
        const json& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
        return v.get<std::string>();
    }

    /// A number or a pair [re, im].
    cplx complex(const std::string& key, std::optional<cplx> def = std::nullopt) {
        if (!has(key)) return required(key, def);
        const json& v = j_.at(key);
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return {v[0].get<double>(), v[1].get<double>()};
        throw ConfigError(where(key) + " must be a number or [re, im]");
    }

    std::vector<double> numbers(const std::string& key) {
        if (!has(key)) return {};
        const json& v = j_.at(key);
        if (!v.is_array()) throw ConfigError(where(key) + " must be an array of numbers");
        std::vector<double> out;
        for (const json& e : v) {
            if (!e.is_number()) throw ConfigError(where(key) + " must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::optional<Section> child(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return Section(j_.at(key), where(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown key " + where(it.key()));
    }

private:
    template <class T>
    T required(const std::string& key, const std::optional<T>& def) const {
        if (!def) throw ConfigError("missing key " + where(key));
        return *def;
    }
    std::string where(const std::string& key) const { return path_ + "." + key; }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::vector<double> linspace(double lo, double hi, int n, bool open) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
        if (open) v.push_back(lo + (hi - lo) * (i + 1) / (n + 1));
        else v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    }
    return v;
}

void require_sorted(const std::vector<double>& v, const std::string& what) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw ConfigError(what + " must be strictly increasing");
}

void parse_background(Section s, RunConfig& cfg) {
    const double q0 = s.number("q0", 1.0);
    const bool by_value = s.has("q_minus") || s.has("q_plus");
    const bool by_phase = s.has("phase_minus") || s.has("phase_plus");
    if (by_value && by_phase) throw ConfigError("background: give tails either as values or as phases");
    if (by_value) {
        cfg.bg.q0 = q0;
        cfg.bg.q_minus = s.complex("q_minus", cplx(q0));
        cfg.bg.q_plus = s.complex("q_plus", cplx(q0));
        cfg.bg.validate();
        cfg.phase_minus = std::arg(cfg.bg.q_minus);
        cfg.phase_plus = std::arg(cfg.bg.q_plus);
    } else {
        cfg.phase_minus = s.number("phase_minus", 0.0);
        cfg.phase_plus = s.number("phase_plus", 0.0);
        if (!(q0 > 0.0)) throw ConfigError("background.q0 must be positive");
        cfg.bg = Background::from_phases(q0, cfg.phase_minus, cfg.phase_plus);
    }
    s.finish();
}

void parse_profile(Section s, ProfileSpec& p) {
    p.family = s.string("family", std::string("constant"));
    if (p.family != "constant" && p.family != "phase_step" && p.family != "bump")
        throw ConfigError("profile.family must be constant, phase_step or bump");
    p.eps = s.complex("eps", cplx(0.0));
    p.x0 = s.number("x0", 0.0);
    p.sigma = s.number("sigma", 1.0);
    p.ell = s.number("ell", 2.0);
    if (!(p.sigma > 0.0)) throw ConfigError("profile.sigma must be positive");
    if (!(p.ell > 0.0)) throw ConfigError("profile.ell must be positive");
    s.finish();
}

std::vector<double> parse_axis(Section s, const std::string& name) {
    std::vector<double> v;
    if (s.has("values")) {
        if (s.has("n") || s.has("min") || s.has("max"))
            throw ConfigError(name + ": give either values or min/max/n");
        v = s.numbers("values");
    } else {
        const int n = s.integer("n");
        if (n < 1) throw ConfigError(name + ".n must be positive");
        v = linspace(s.number("min"), s.number("max"), n, s.boolean("open", false));
    }
    s.finish();
    if (v.empty()) throw ConfigError(name + " is empty");
    return v;
}

void parse_asymptote(Section s, AsymptoteSpec& a) {
    if (s.has("x")) a.x = s.number("x");
    if (s.has("t")) a.t = s.number("t");
    if (auto sw = s.child("sweep")) {
        a.sweep_t = sw->numbers("t");
        a.sweep_x = sw->numbers("x");
        a.sweep_xi = sw->numbers("xi");
        sw->finish();
        if (a.sweep_t.empty()) throw ConfigError("asymptote.sweep.t is empty");
        if (a.sweep_x.empty() == a.sweep_xi.empty())
            throw ConfigError("asymptote.sweep needs exactly one of x and xi");
    }
    a.collar = s.number("collar", 1e-4);
    a.collar_fallback = s.boolean("collar_fallback", false);
    s.finish();
    if (a.x.has_value() != a.t.has_value()) throw ConfigError("asymptote needs both x and t");
    if (!(a.collar >= 0.0)) throw ConfigError("asymptote.collar must be nonnegative");
}

void parse_sim(Section s, SimSpec& sim) {
    sim.grid.x_min = s.number("x_min", -400.0);
    sim.grid.x_max = s.number("x_max", 400.0);
    sim.grid.n_points = s.integer("n_points", 1 << 13);
    sim.T = s.number("T", 1.0);
    sim.snapshots = s.numbers("snapshots");
    sim.dt = s.number("dt", -1.0);
    sim.sponge_fraction = s.number("sponge_fraction", 0.1);
    sim.sponge_strength = s.number("sponge_strength", 1.0);
    sim.gauge = s.boolean("gauge", false);
    s.finish();
    try {
        sim.grid.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("sim: ") + e.what());
    }
    if (!(sim.T > 0.0)) throw ConfigError("sim.T must be positive");
    if (sim.sponge_fraction < 0.0 || sim.sponge_fraction >= 0.5)
        throw ConfigError("sim.sponge_fraction must lie in [0, 0.5)");
    if (sim.sponge_strength < 0.0) throw ConfigError("sim.sponge_strength must be nonnegative");
    require_sorted(sim.snapshots, "sim.snapshots");
    for (double t : sim.snapshots)
        if (t < 0.0 || t > sim.T) throw ConfigError("sim.snapshots must lie in [0, T]");
    if (sim.dt > 0.5 * sim.grid.dx() * sim.grid.dx())
        throw ConfigError("sim.dt exceeds the stability bound 0.5 dx^2");
}

SimOptions sim_options(const SimSpec& s) {
    SimOptions o;
    o.sponge_fraction = s.sponge_fraction;
    o.sponge_strength = s.sponge_strength;
    return o;
}

std::string csv_cell(std::optional<double> v) { return v ? format_double(*v) : std::string(); }

class Csv {
public:
    explicit Csv(const std::string& header) { out_ << header << '\n'; }
    Csv& operator<<(const std::string& cell) {
        if (!first_) out_ << ',';
        out_ << cell;
        first_ = false;
        return *this;
    }
    Csv& operator<<(double v) { return *this << format_double(v); }
    void end_row() {
        out_ << '\n';
        first_ = true;
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    bool first_ = true;
};

ScatteringData scattering_for(const RunConfig& cfg) {
    return reflection_table(cfg.make_profile(), cfg.z_grid);
}

std::string gnuplot_script(const std::string& csv) {
    const std::string stem = csv.substr(0, csv.size() - 4);
    std::ostringstream g;
    g << "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n"
      << "set output '" << stem << ".png'\n";
    if (stem == "scattering")
        g << "set xlabel 'z'\nplot '" << csv << "' using 1:2 with lines, '' using 1:3 with lines, "
          << "'' using 1:4 with lines, '' using 1:5 with lines\n";
    else if (stem == "regions")
        g << "set xlabel 'xi'\nplot '" << csv << "' using 1:8 with linespoints, '' using 1:9 with linespoints, "
          << "'' using 1:10 with linespoints, '' using 1:11 with linespoints, '' using 1:12 with linespoints\n";
    else if (stem == "regions_realness")
        g << "set xlabel 'xi'\nset logscale y\nplot '" << csv << "' using 1:(abs($2)) with linespoints, "
          << "'' using 1:(abs($3)) with linespoints, '' using 1:(abs($4)) with linespoints, "
          << "'' using 1:(abs($5)) with linespoints\n";
    else if (stem == "asymptote")
        g << "set xlabel 'x'\nplot '" << csv << "' using 2:(sqrt($5**2 + $6**2)) with points title '|q|'\n";
    else if (stem == "simulation")
        g << "set xlabel 'x'\nplot '" << csv << "' using 2:(sqrt($3**2 + $4**2)) with lines title '|q|'\n";
    else if (stem == "compare")
        g << "set xlabel 't'\nset logscale xy\nplot '" << csv << "' using 2:3 with linespoints title 'abs_err'\n";
    else
        g << "plot '" << csv << "' using 1:2 with lines\n";
    return g.str();
}

}  // namespace

InitialProfile RunConfig::make_profile() const {
    const double q0 = bg.q0;
    if (profile.family == "constant") {
        if (std::abs(phase_minus - phase_plus) > 0.0)
            throw ConfigError("profile.family constant needs equal tail phases");
        return InitialProfile::constant(q0, phase_minus);
    }
    if (profile.family == "phase_step")
        return InitialProfile::phase_step(q0, phase_minus, phase_plus, profile.ell, profile.x0);
    return InitialProfile::bump(q0, profile.eps, profile.x0, profile.sigma, phase_minus, phase_plus);
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    Section s(root, "config");
    if (auto b = s.child("background")) parse_background(*b, cfg);
    else cfg.bg = Background::from_phases(1.0, 0.0, 0.0);
    if (auto p = s.child("profile")) parse_profile(*p, cfg.profile);
    if (auto z = s.child("z_grid")) {
        if (z->has("n_per_side")) {
            const int n = z->integer("n_per_side");
            if (z->has("values")) throw ConfigError("z_grid: give either values or n_per_side");
            z->finish();
            if (n < 4) throw ConfigError("z_grid.n_per_side must be at least 4");
            cfg.z_grid = default_z_grid(cfg.bg.q0, n);
        } else {
            cfg.z_grid = parse_axis(*z, "z_grid");
        }
        require_sorted(cfg.z_grid, "z_grid");
        if (std::find(cfg.z_grid.begin(), cfg.z_grid.end(), 0.0) != cfg.z_grid.end())
            throw ConfigError("z_grid must avoid z = 0");
    } else {
        cfg.z_grid = default_z_grid(cfg.bg.q0);
    }
    if (auto x = s.child("xi_grid")) cfg.xi_grid = parse_axis(*x, "xi_grid");
    if (auto a = s.child("asymptote")) parse_asymptote(*a, cfg.asymptote);
    if (auto m = s.child("sim")) parse_sim(*m, cfg.sim);
    if (auto c = s.child("compare")) {
        cfg.compare.xi = c->numbers("xi");
        cfg.compare.t = c->numbers("t");
        c->finish();
        require_sorted(cfg.compare.t, "compare.t");
        for (double t : cfg.compare.t)
            if (!(t > 0.0)) throw ConfigError("compare.t must be positive");
    }
    if (auto t = s.child("tolerances")) {
        cfg.realness_tol = t->number("realness", 1e-6);
        t->finish();
    }
    cfg.output_dir = s.string("output_dir", std::string("."));
    s.finish();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nan("");
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

AsymptoteValue leading_order(double x, double t, const ScatteringData& data, const AsymptoteSpec& spec) {
    if (!(t > 0.0)) throw ConfigError("asymptote needs t > 0");
    const double xi = x / t, q0 = data.bg.q0;
    const RegionParams rp = region_geometry(xi, q0);
    switch (rp.tag) {
        case Region::plane_wave_I:
        case Region::plane_wave_II: return {q_plane_wave(x, t, data).q_leading, to_string(rp.tag)};
        case Region::boundary:
            if (xi != 0.0) return {q_plane_wave(x, t, data).q_leading, to_string(rp.tag)};
            throw CollarError("xi = 0 separates the two elliptic sectors; no leading term is defined there");
        case Region::elliptic_I:
        case Region::elliptic_II: {
            const double alpha2 = rp.alpha ? rp.alpha->alpha2 : 0.0;
            if (alpha2 < spec.collar && !spec.collar_fallback)
                throw CollarError("xi = " + format_double(xi) + " is in the boundary collar (alpha2 = " +
                                  format_double(alpha2) +
                                  "); set asymptote.collar_fallback to true to use the plane-wave edge value");
            EllipticOptions opt;
            opt.collar = spec.collar;
            const EllipticWaveResult r = q_elliptic(x, t, data, opt);
            return {r.q, to_string(rp.tag) + (r.collar_fallback ? "_collar" : "")};
        }
    }
    throw InvalidArgument("unhandled region");
}

CommandResult cmd_scatter(const RunConfig& cfg) {
    const ScatteringData d = scattering_for(cfg);
    Csv csv("z,re_rho,im_rho,re_varrho,im_varrho,unitarity_residual");
    for (std::size_t i = 0; i < d.z_grid.size(); ++i) {
        csv << d.z_grid[i] << d.rho_values[i].real() << d.rho_values[i].imag() << d.varrho_values[i].real()
            << d.varrho_values[i].imag() << d.unitarity_residual[i];
        csv.end_row();
    }
    const double worst = *std::max_element(d.unitarity_residual.begin(), d.unitarity_residual.end());
    return {{{"scattering.csv", csv.str()}},
            "scattering: " + std::to_string(d.z_grid.size()) + " points, max unitarity residual " +
                format_double(worst) + "\n"};
}

CommandResult cmd_regions(const RunConfig& cfg) {
    if (cfg.xi_grid.empty()) throw ConfigError("regions needs xi_grid");
    std::optional<ScatteringData> data;
    Csv csv("xi,tag,z_minus,z_plus,z0,alpha1,alpha2,Omega,omega,G_inf,ghat_inf,im_tau,residual_3_61");
    Csv real("xi,im_Omega,im_omega,im_G_inf,im_ghat_inf,re_tau,b_residual,realness_ok");
    int worst_rows = 0;
    for (double xi : cfg.xi_grid) {
        const RegionParams rp = region_geometry(xi, cfg.bg.q0);
        csv << xi << to_string(rp.tag) << csv_cell(rp.z_minus) << csv_cell(rp.z_plus) << csv_cell(rp.z0);
        csv << csv_cell(rp.alpha ? std::optional(rp.alpha->alpha1) : std::nullopt)
            << csv_cell(rp.alpha ? std::optional(rp.alpha->alpha2) : std::nullopt);
        std::optional<EllipticInvariants> inv;
        const bool elliptic = rp.tag == Region::elliptic_I || rp.tag == Region::elliptic_II;
        if (elliptic && rp.alpha->alpha2 >= cfg.asymptote.collar) {
            if (!data) data = scattering_for(cfg);
            EllipticOptions opt;
            opt.collar = cfg.asymptote.collar;
            inv = elliptic_invariants(xi, *data, opt);
        }
        if (inv) {
            csv << inv->Omega << inv->omega.real() << inv->G_inf << inv->ghat_inf.real() << inv->tau.imag();
            const bool ok = inv->realness_residual() < cfg.realness_tol && std::abs(inv->tau.real()) < 1e-8 &&
                            inv->tau.imag() > 0.0;
            if (!ok) ++worst_rows;
            real << xi << inv->im_Omega << inv->omega.imag() << inv->im_G_inf << inv->ghat_inf.imag()
                 << inv->tau.real() << inv->b_residual << std::string(ok ? "1" : "0");
            real.end_row();
        } else {
            csv << "" << "" << "" << "" << "";
        }
        csv << csv_cell(rp.residual);
        csv.end_row();
    }
    std::string msg = "regions: " + std::to_string(cfg.xi_grid.size()) + " rows";
    if (worst_rows > 0) msg += ", " + std::to_string(worst_rows) + " elliptic rows fail the realness check";
    return {{{"regions.csv", csv.str()}, {"regions_realness.csv", real.str()}}, msg + "\n"};
}

CommandResult cmd_asymptote(const RunConfig& cfg) {
    const AsymptoteSpec& a = cfg.asymptote;
    if (!a.x && a.sweep_t.empty()) throw ConfigError("asymptote needs x and t or a sweep");
    const ScatteringData data = scattering_for(cfg);
    Csv csv("t,x,xi,region,re_q,im_q");
    std::ostringstream console;
    auto row = [&](double x, double t) {
        const AsymptoteValue v = leading_order(x, t, data, a);
        csv << t << x << x / t << v.region << v.q.real() << v.q.imag();
        csv.end_row();
        return v;
    };
    if (a.x) {
        const AsymptoteValue v = row(*a.x, *a.t);
        console << format_double(v.q.real()) << ' ' << format_double(v.q.imag()) << '\n';
    }
    for (double t : a.sweep_t) {
        for (double x : a.sweep_x) row(x, t);
        for (double xi : a.sweep_xi) row(xi * t, t);
    }
    return {{{"asymptote.csv", csv.str()}}, console.str()};
}

CommandResult cmd_simulate(const RunConfig& cfg) {
    const SimSpec& s = cfg.sim;
    const SimState init = init_profile(cfg.make_profile(), s.grid);
    std::vector<double> times = s.snapshots;
    if (times.empty()) times.push_back(s.T);
    const std::vector<SimState> snaps = simulate(init, s.T, times, sim_options(s), s.dt);
    const double q04 = std::pow(cfg.bg.q0, 4);
    Csv csv("t,x,re_q,im_q");
    for (const SimState& st : snaps) {
        const cplx gauge = s.gauge ? std::exp(0.5 * kI * q04 * st.t) : cplx(1.0);
        for (int i = 0; i < st.grid.n_points; ++i) {
            const cplx v = st.q[i] * gauge;
            csv << st.t << st.grid.x(i) << v.real() << v.imag();
            csv.end_row();
        }
    }
    return {{{"simulation.csv", csv.str()}},
            "simulate: " + std::to_string(snaps.size()) + " snapshots to t = " + format_double(s.T) + "\n"};
}

CommandResult cmd_compare(const RunConfig& cfg) {
    const CompareSpec& c = cfg.compare;
    if (c.xi.empty() || c.t.empty()) throw ConfigError("compare needs xi and t");
    if (c.t.size() < 2) throw ConfigError("compare.t needs at least two times for the slope fit");
    const SimSpec& s = cfg.sim;
    const double T = c.t.back();
    const double width = s.sponge_fraction * (s.grid.x_max - s.grid.x_min);
    for (double xi : c.xi)
        for (double t : c.t)
            if (xi * t < s.grid.x_min + width || xi * t > s.grid.x_max - width)
                throw ConfigError("compare point x = " + format_double(xi * t) +
                                  " lies in the sponge or outside the simulation domain");
    const SimState init = init_profile(cfg.make_profile(), s.grid);
    const std::vector<SimState> snaps = simulate(init, T, c.t, sim_options(s), s.dt);
    const ScatteringData data = scattering_for(cfg);
    Csv csv("xi,t,abs_err,fitted_slope");
    std::ostringstream console;
    for (double xi : c.xi) {
        std::vector<double> err;
        for (std::size_t k = 0; k < c.t.size(); ++k) {
            const double x = xi * c.t[k];
            err.push_back(std::abs(sample(snaps[k], x) - leading_order(x, c.t[k], data, cfg.asymptote).q));
        }
        const double slope = loglog_slope(c.t, err);
        for (std::size_t k = 0; k < c.t.size(); ++k) {
            csv << xi << c.t[k] << err[k] << slope;
            csv.end_row();
        }
        console << "xi = " << format_double(xi) << ": fitted slope " << format_double(slope) << '\n';
    }
    return {{{"compare.csv", csv.str()}}, console.str()};
}

CommandResult run_command(const std::string& name, const RunConfig& cfg, bool gnuplot) {
    static const std::vector<std::pair<std::string, std::function<CommandResult(const RunConfig&)>>> table = {
        {"scatter", cmd_scatter},   {"regions", cmd_regions}, {"asymptote", cmd_asymptote},
        {"simulate", cmd_simulate}, {"compare", cmd_compare},
    };
    for (const auto& [n, fn] : table) {
        if (n != name) continue;
        CommandResult r = fn(cfg);
        if (gnuplot) {
            const std::size_t n_csv = r.files.size();
            for (std::size_t i = 0; i < n_csv; ++i) {
                const std::string& f = r.files[i].name;
                r.files.push_back({f.substr(0, f.size() - 4) + ".gp", gnuplot_script(f)});
            }
        }
        return r;
    }
    throw ConfigError("unknown command " + name);
}

void write_outputs(const CommandResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const OutputFile& f : result.files) {
        const auto target = dir / f.name;
        const auto tmp = dir / (f.name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << f.content;
            if (!out) throw Error("cannot write " + tmp.string(), 10);
        }
        std::filesystem::rename(tmp, target);
    }
}

}  // namespace gi
