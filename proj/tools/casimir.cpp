// casimir: command-line front end for the casbox library.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "casbox/casbox.hpp"

using namespace casbox;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumeric = 3, kSolver = 4 };

struct Options {
    int dim = 0;
    std::string sides;
    double T = 1.0;
    std::string N = "auto";
    double n_inf = 0.0;
    double alpha = 0.0;
    bool alpha_search = false;
    double tol = 1e-10;
    double xi = -1.0; // < 0: critical coupling
    std::string format = "csv";
    std::string output;
    int threads = 1;

    // command specific
    std::string grid;
    std::string points;
    std::string side = "1,0";
    std::string kind = "energy";
    std::string a2 = "0.05:10:200";
    bool log_grid = false;
    double solver_tol = 1e-7;
};

std::vector<double> parse_list(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (item.empty()) continue;
        try {
            size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number '" + item + "'");
        }
    }
    return out;
}

BoxGeometry make_geometry(const Options& o) {
    std::vector<double> s = o.sides.empty() ? std::vector<double>(std::max(o.dim, 1), 1.0) : parse_list(o.sides, ',');
    if (o.dim != 0 && static_cast<int>(s.size()) != o.dim)
        throw ConfigError("--sides lists " + std::to_string(s.size()) + " lengths but -d is " + std::to_string(o.dim));
    try {
        return BoxGeometry(s);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

TruncationParams base_truncation(const Options& o, const BoxGeometry& g) {
    TruncationParams tp;
    tp.T = o.T;
    tp.alpha = o.alpha > 0.0 ? o.alpha : TruncationParams::default_alpha(g.dim());
    tp.alpha_search = o.alpha_search;
    tp.N_inf = o.n_inf;
    if (o.N != "auto") {
        auto v = parse_list(o.N, ',');
        if (v.size() != 1) throw ConfigError("-N takes a number or 'auto'");
        tp.N = v[0];
    }
    try {
        tp.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (o.N == "auto" && !(o.tol > 0.0)) throw ConfigError("--tol must be positive");
    return tp;
}

bool auto_n(const Options& o) { return o.N == "auto"; }

SideId parse_side(const std::string& s, int d) {
    auto v = parse_list(s, ',');
    if (v.size() != 2 || v[0] != std::floor(v[0]) || (v[1] != 0.0 && v[1] != 1.0))
        throw ConfigError("--side expects 'p,lambda' with lambda in {0,1}");
    int p = static_cast<int>(v[0]);
    if (p < 1 || p > d) throw ConfigError("--side axis out of range");
    return {p - 1, static_cast<int>(v[1])};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Rows of named numeric columns, written as CSV or JSON {config, rows}.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string label_column; // optional leading text column
    std::vector<std::string> labels;

    void write(std::ostream& os, const std::string& format, const ojson& config) const {
        if (format == "json") {
            ojson doc;
            doc["config"] = config;
            doc["rows"] = ojson::array();
            for (const auto& r : rows) {
                ojson row;
                if (!labels.empty()) row[label_column] = labels[&r - rows.data()];
                for (size_t k = 0; k < columns.size(); ++k) {
                    if (std::isfinite(r[k]))
                        row[columns[k]] = r[k];
                    else
                        row[columns[k]] = nullptr;
                }
                doc["rows"].push_back(row);
            }
            os << doc.dump(2) << '\n';
            return;
        }
        if (!labels.empty()) os << label_column << ',';
        for (size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
        os << '\n';
        for (const auto& r : rows) {
            if (!labels.empty()) os << labels[&r - rows.data()] << ',';
            for (size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << fmt(r[k]);
            os << '\n';
        }
    }
};

ojson config_json(const Options& o, const BoxGeometry& g, const std::string& command) {
    ojson c;
    c["command"] = command;
    c["dimension"] = g.dim();
    c["sides"] = g.sides();
    c["T"] = o.T;
    c["N"] = o.N;
    c["N_inf"] = o.n_inf;
    c["alpha"] = o.alpha > 0.0 ? o.alpha : TruncationParams::default_alpha(g.dim());
    c["alpha_search"] = o.alpha_search;
    c["tol"] = o.tol;
    return c;
}

void emit(const Options& o, const Table& t, const ojson& config) {
    if (o.output.empty()) {
        t.write(std::cout, o.format, config);
        return;
    }
    std::ofstream f(o.output);
    if (!f) throw ConfigError("cannot open output file " + o.output);
    t.write(f, o.format, config);
}

// Evaluates f(i) for i in [0, n) on `threads` workers; results land by index,
// so output order never depends on scheduling.
template <class R, class F>
std::vector<R> parallel_map(size_t n, int threads, F&& f) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errs(n);
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < n;) {
            try {
                out[i] = f(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    const int k = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    std::vector<std::thread> pool;
    for (int t = 1; t < k; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

// Cell-centred points x_k = a (k + 1/2) / n per axis, from "n" or "n1xn2x...".
std::vector<Point> grid_points(const std::string& spec, const std::vector<double>& lengths) {
    std::vector<int> counts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, 'x')) {
        auto v = parse_list(item, ',');
        if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0])) throw ConfigError("bad --grid '" + spec + "'");
        counts.push_back(static_cast<int>(v[0]));
    }
    if (counts.size() == 1) counts.assign(lengths.size(), counts[0]);
    if (counts.size() != lengths.size()) throw ConfigError("--grid has the wrong number of axes");
    std::vector<Point> pts;
    std::vector<int> it(lengths.size(), 0);
    if (lengths.empty()) return {Point{}};
    while (true) {
        Point p(lengths.size());
        for (size_t k = 0; k < lengths.size(); ++k) p[k] = lengths[k] * (it[k] + 0.5) / counts[k];
        pts.push_back(p);
        // last axis fastest
        int k = static_cast<int>(lengths.size()) - 1;
        while (k >= 0 && ++it[k] == counts[k]) it[k--] = 0;
        if (k < 0) break;
    }
    return pts;
}

std::vector<Point> explicit_points(const std::string& spec, size_t dim) {
    std::vector<Point> pts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        Point p = parse_list(item, ',');
        if (p.size() != dim) throw ConfigError("point '" + item + "' has the wrong dimension");
        pts.push_back(p);
    }
    if (pts.empty()) throw ConfigError("--points is empty");
    return pts;
}

int cmd_tensor(const Options& o) {
    const BoxGeometry g = make_geometry(o);
    TruncationParams tp = base_truncation(o, g);
    if (auto_n(o)) tp = auto_truncation(ResultKind::Tensor, g, o.tol, tp);
    const int d = g.dim();
    std::vector<Point> pts = !o.points.empty() ? explicit_points(o.points, d) : grid_points(o.grid.empty() ? "21" : o.grid, g.sides());
    for (const Point& p : pts)
        if (!g.contains_open(p)) {
            if (g.contains_closed(p)) throw EdgeError("tensor: grid point on the boundary");
            throw DomainError("tensor: grid point outside the box");
        }
    const double xi = o.xi < 0.0 ? xi_critical(d) : o.xi;

    Table t;
    for (int i = 0; i < d; ++i) t.columns.push_back("xs" + std::to_string(i + 1));
    for (int m = 0; m <= d; ++m)
        for (int n = m; n <= d; ++n) {
            std::string c = "T" + std::to_string(m) + std::to_string(n);
            for (const char* suf : {"_conf", "_conf_rad", "_nonconf", "_nonconf_rad"}) t.columns.push_back(c + suf);
        }
    t.columns.push_back("T00_total");
    t.columns.push_back("T00_total_rad");
    t.rows = parallel_map<std::vector<double>>(pts.size(), o.threads, [&](size_t k) {
        const Point& p = pts[k];
        StressTensorVEV s = stress_energy(p, g, tp);
        std::vector<double> row;
        for (int i = 0; i < d; ++i) row.push_back(p[i] / g.side(i));
        for (int m = 0; m <= d; ++m)
            for (int n = m; n <= d; ++n) {
                row.push_back(s.conformal[m][n].re());
                row.push_back(s.conformal[m][n].radius);
                row.push_back(s.nonconformal[m][n].re());
                row.push_back(s.nonconformal[m][n].radius);
            }
        CertifiedValue tot = s.total(0, 0, xi);
        row.push_back(tot.re());
        row.push_back(tot.radius);
        return row;
    });
    ojson cfg = config_json(o, g, "tensor");
    cfg["xi"] = xi;
    cfg["N_used"] = tp.N;
    cfg["N_inf_used"] = tp.n_inf();
    emit(o, t, cfg);
    return kOk;
}

int cmd_pressure(const Options& o) {
    const BoxGeometry g = make_geometry(o);
    const int d = g.dim();
    const SideId side = parse_side(o.side, d);
    TruncationParams tp = base_truncation(o, g);
    if (auto_n(o)) tp = auto_truncation(ResultKind::Pressure, g, o.tol, tp);

    std::vector<double> tang;
    std::vector<int> axes;
    for (int i = 0; i < d; ++i)
        if (i != side.axis) {
            axes.push_back(i);
            tang.push_back(g.side(i));
        }
    std::vector<Point> tpts;
    if (!o.points.empty())
        tpts = explicit_points(o.points, tang.size());
    else
        tpts = grid_points(o.grid.empty() ? "50" : o.grid, tang);

    Table t;
    for (int i : axes) t.columns.push_back("xs" + std::to_string(i + 1));
    t.columns.push_back("p" + std::to_string(side.axis + 1));
    t.columns.push_back("p" + std::to_string(side.axis + 1) + "_rad");
    t.rows = parallel_map<std::vector<double>>(tpts.size(), o.threads, [&](size_t k) {
        Point x(d, 0.0);
        x[side.axis] = side.lambda * g.side(side.axis);
        for (size_t j = 0; j < axes.size(); ++j) x[axes[j]] = tpts[k][j];
        CertifiedValue p = pressure(side, x, g, tp)[side.axis];
        std::vector<double> row;
        for (size_t j = 0; j < axes.size(); ++j) row.push_back(tpts[k][j] / tang[j]);
        row.push_back(p.re());
        row.push_back(p.radius);
        return row;
    });
    ojson cfg = config_json(o, g, "pressure");
    cfg["side"] = o.side;
    cfg["N_used"] = tp.N;
    cfg["N_inf_used"] = tp.n_inf();
    emit(o, t, cfg);
    return kOk;
}

int single_value(const Options& o, bool energy) {
    const BoxGeometry g = make_geometry(o);
    TruncationParams tp = base_truncation(o, g);
    SideId side{0, 0};
    if (!energy) side = parse_side(o.side, g.dim());
    if (auto_n(o)) tp = auto_truncation(energy ? ResultKind::Energy : ResultKind::Force, g, o.tol, tp, side);
    CertifiedValue v = energy ? energy_ren(g, tp) : force_ren(side, g, tp);
    if (o.format == "text") {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.10g ± %.1e", v.re(), v.radius);
        std::ostream* os = &std::cout;
        std::ofstream f;
        if (!o.output.empty()) {
            f.open(o.output);
            os = &f;
        }
        *os << buf << '\n';
        return kOk;
    }
    Table t;
    t.columns = {energy ? "energy" : "force", "radius", "N", "N_inf"};
    t.rows.push_back({v.re(), v.radius, tp.N, tp.n_inf()});
    ojson cfg = config_json(o, g, energy ? "energy" : "force");
    if (!energy) cfg["side"] = o.side;
    emit(o, t, cfg);
    return kOk;
}

ScanKind parse_kind(const std::string& k) {
    if (k == "energy") return ScanKind::Energy;
    if (k == "force") return ScanKind::Force;
    throw ConfigError("scan kind must be 'energy' or 'force'");
}

ScanSetup make_setup(const Options& o, const BoxGeometry& g) {
    if (g.dim() < 2) throw ConfigError("scan/features need d >= 2 (the second side is varied)");
    ScanSetup s;
    s.base = g;
    s.free_axis = 1;
    s.side = {0, 0};
    s.tp = base_truncation(o, g);
    s.tol = auto_n(o) ? o.tol : 0.0;
    return s;
}

int cmd_scan(const Options& o) {
    const BoxGeometry g = make_geometry(o);
    const ScanSetup s = make_setup(o, g);
    const ScanKind kind = parse_kind(o.kind);
    auto r = parse_list(o.a2, ':');
    if (r.size() != 3 || r[2] != std::floor(r[2])) throw ConfigError("--a2 expects lo:hi:count");
    std::vector<double> xs;
    try {
        xs = make_grid(r[0], r[1], static_cast<int>(r[2]), o.log_grid);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    Table t;
    t.columns = {"a2", to_string(kind), "radius", "N", "N_inf"};
    t.rows = parallel_map<std::vector<double>>(xs.size(), o.threads, [&](size_t k) {
        TruncationParams tp = s.truncation_at(kind, xs[k]);
        CertifiedValue v = s.eval(kind, xs[k], tp);
        return std::vector<double>{xs[k], v.re(), v.radius, tp.N, tp.n_inf()};
    });
    ojson cfg = config_json(o, g, "scan");
    cfg["kind"] = o.kind;
    cfg["a2"] = o.a2;
    cfg["log"] = o.log_grid;
    emit(o, t, cfg);
    return kOk;
}

int cmd_features(const Options& o) {
    const BoxGeometry g = make_geometry(o);
    ScanSetup s = make_setup(o, g);
    const double tol = o.solver_tol;

    struct Feature {
        std::string name;
        double value, uncertainty;
    };
    std::vector<Feature> f;
    Extremum mx = find_extremum(ScanKind::Energy, s, 0.5, 1.0, tol);
    f.push_back({"a2_max", mx.location.re(), mx.location.radius});
    f.push_back({"energy_at_a2_max", mx.value.re(), mx.value.radius});
    CertifiedValue z1 = find_zero(ScanKind::Energy, s, 0.2, 0.5, tol);
    CertifiedValue z2 = find_zero(ScanKind::Energy, s, 2.0, 3.5, tol);
    f.push_back({"energy_zero_1", z1.re(), z1.radius});
    f.push_back({"energy_zero_2", z2.re(), z2.radius});
    CertifiedValue fz = find_zero(ScanKind::Force, s, 1.0, 2.0, tol);
    f.push_back({"force_zero", fz.re(), fz.radius});

    std::vector<double> small{0.1, 0.125, 0.15, 0.175, 0.2}, tail;
    for (double a = 20.0; a <= 100.0; a += 10.0) tail.push_back(a);
    for (ScanKind k : {ScanKind::Energy, ScanKind::Force}) {
        std::vector<std::pair<double, double>> ss, ts;
        for (double a : small) ss.push_back({a, s.eval(k, a).re()});
        for (double a : tail) ts.push_back({a, s.eval(k, a).re()});
        FitResult fs = fit_small_a2(ss);
        auto [m, q, rms] = fit_asymptote(ts);
        std::string p = k == ScanKind::Energy ? "energy" : "force";
        f.push_back({p + "_small_a2_coefficient", fs.coef[0], fs.rms});
        f.push_back({p + "_asymptote_slope", m, rms});
        f.push_back({p + "_asymptote_intercept", q, rms});
    }

    if (o.format == "text") {
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!o.output.empty()) {
            file.open(o.output);
            os = &file;
        }
        for (const auto& x : f) {
            char buf[160];
            if (std::isnan(x.uncertainty))
                std::snprintf(buf, sizeof buf, "%-30s %.10g", x.name.c_str(), x.value);
            else
                std::snprintf(buf, sizeof buf, "%-30s %.10g ± %.1e", x.name.c_str(), x.value, x.uncertainty);
            *os << buf << '\n';
        }
        return kOk;
    }
    Table t;
    t.label_column = "feature";
    t.columns = {"value", "uncertainty"};
    for (const auto& x : f) {
        t.labels.push_back(x.name);
        t.rows.push_back({x.value, x.uncertainty});
    }
    ojson cfg = config_json(o, g, "features");
    cfg["solver_tol"] = tol;
    emit(o, t, cfg);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir observables of a Dirichlet scalar field in a box"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read key=value options from a file");
    Options o;

    app.add_option("-d,--dim", o.dim, "Space dimension (defaults to the number of --sides)");
    app.add_option("--sides", o.sides, "Comma separated side lengths a1,...,ad");
    app.add_option("-T,--mellin-cut", o.T, "Mellin cut T")->capture_default_str();
    app.add_option("-N,--truncation", o.N, "Shell radius N, or 'auto' to meet --tol")->capture_default_str();
    app.add_option("--n-inf", o.n_inf, "Separate shell radius for the image sums (0: same as N)");
    app.add_option("--alpha", o.alpha, "Bound parameter alpha (default 0.03 for d=1, 0.04 otherwise)");
    app.add_flag("--alpha-search", o.alpha_search, "Minimize each remainder bound over alpha in {0.01..0.2}");
    app.add_option("--tol", o.tol, "Target radius when N is 'auto'")->capture_default_str();
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}))->capture_default_str();
    app.add_option("-o,--output", o.output, "Output file (default stdout)");
    app.add_option("--threads", o.threads, "Worker threads for grid evaluations")
        ->envname("CASIMIR_THREADS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* tensor = app.add_subcommand("tensor", "Stress-energy VEV on a grid of interior points");
    tensor->add_option("--grid", o.grid, "Points per axis, 'n' or 'n1xn2...' (cell centred)");
    tensor->add_option("--points", o.points, "Explicit points 'x1,x2;y1,y2;...'");
    tensor->add_option("--xi", o.xi, "Coupling for the T00_total column (default: critical)");

    auto* pres = app.add_subcommand("pressure", "Boundary pressure along a side");
    pres->add_option("--side", o.side, "Side 'p,lambda' (1-based axis)")->capture_default_str();
    pres->add_option("--grid", o.grid, "Points per tangential axis (cell centred)");
    pres->add_option("--points", o.points, "Explicit tangential coordinates 'x;y;...'");

    auto* energy = app.add_subcommand("energy", "Renormalized bulk energy");
    auto* force = app.add_subcommand("force", "Renormalized integrated force on a side");
    force->add_option("--side", o.side, "Side 'p,lambda' (1-based axis)")->capture_default_str();

    auto* scan_cmd = app.add_subcommand("scan", "Energy or force as a function of a2");
    scan_cmd->add_option("kind", o.kind, "energy | force")->required();
    scan_cmd->add_option("--a2", o.a2, "Range lo:hi:count")->capture_default_str();
    scan_cmd->add_flag("--log", o.log_grid, "Logarithmic spacing");

    auto* feat = app.add_subcommand("features", "Extremum, zeros and asymptotic fits in a2");
    feat->add_option("--solver-tol", o.solver_tol, "Bracket width for extremum/zero searches")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*tensor) return cmd_tensor(o);
        if (*pres) return cmd_pressure(o);
        if (*energy) return single_value(o, true);
        if (*force) return single_value(o, false);
        if (*scan_cmd) return cmd_scan(o);
        if (*feat) return cmd_features(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const PoleError& e) {
        std::cerr << "PoleError: " << e.what() << '\n';
        return kNumeric;
    } catch (const EdgeError& e) {
        std::cerr << "EdgeError: " << e.what() << '\n';
        return kNumeric;
    } catch (const DomainError& e) {
        std::cerr << "DomainError: " << e.what() << '\n';
        return kNumeric;
    } catch (const BracketError& e) {
        std::cerr << "BracketError: " << e.what() << '\n';
        return kSolver;
    } catch (const FitError& e) {
        std::cerr << "FitError: " << e.what() << '\n';
        return kSolver;
    }
    return kOk;
}
