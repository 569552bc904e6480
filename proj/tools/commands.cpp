#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qzeta/qzeta.hpp"
#include "qzeta/reference.hpp"
#include "qzeta/zeros.hpp"

namespace qzeta_cli {

using qzeta::Cx;
using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

Cx parse_complex(const std::string& text) {
    double re = 0.0, im = 0.0;
    const size_t comma = text.find(',');
    if (comma == std::string::npos) {
        re = std::stod(text);
    } else {
        re = std::stod(text.substr(0, comma));
        im = std::stod(text.substr(comma + 1));
    }
    return Cx(re, im);
}

// "principal:N" or a file: first line the modulus, then "k re im" rows
// (unlisted residues default to 0).
qzeta::DirichletCharacter load_character(const std::string& src) {
    const std::string prefix = "principal:";
    if (src.rfind(prefix, 0) == 0)
        return qzeta::principal_character(std::stoi(src.substr(prefix.size())));
    std::ifstream in(src);
    if (!in) throw CLI::ValidationError("--chi", "cannot open character file: " + src);
    int modulus = 0;
    if (!(in >> modulus) || modulus < 1)
        throw CLI::ValidationError("--chi", "character file must start with the modulus");
    std::vector<Cx> values(static_cast<size_t>(modulus), Cx(0.0));
    int k;
    double re, im;
    while (in >> k >> re >> im) {
        if (k < 1 || k > modulus)
            throw CLI::ValidationError("--chi", "residue out of range in character file");
        values[static_cast<size_t>(k - 1)] = Cx(re, im);
    }
    return qzeta::make_character(modulus, std::move(values));
}

const char* strategy_name(qzeta::Strategy s) {
    switch (s) {
        case qzeta::Strategy::DIRECT: return "direct";
        case qzeta::Strategy::EXPANSION: return "expansion";
        case qzeta::Strategy::EULER_MACLAURIN: return "em";
    }
    return "?";
}

const char* status_name(qzeta::PointStatus s) {
    switch (s) {
        case qzeta::PointStatus::CONVERGED: return "CONVERGED";
        case qzeta::PointStatus::REFINED_AFTER_RESTART: return "REFINED_AFTER_RESTART";
        case qzeta::PointStatus::LOST: return "LOST";
    }
    return "?";
}

// Collects '#' metadata lines, one header row, and data rows; renders
// identically on every run with the same inputs (exact float echo).
struct Table {
    std::vector<std::string> meta;
    std::string header;
    std::vector<std::string> rows;
    std::vector<std::string> trailer; // '#' lines after the data

    std::string render_csv() const {
        std::ostringstream out;
        for (const auto& m : meta) out << "# " << m << "\n";
        if (!header.empty()) out << header << "\n";
        for (const auto& r : rows) out << r << "\n";
        for (const auto& t : trailer) out << "# " << t << "\n";
        return out.str();
    }

    json render_json() const {
        json j;
        j["meta"] = meta;
        std::vector<std::string> cols;
        std::istringstream hs(header);
        for (std::string c; std::getline(hs, c, ',');) cols.push_back(c);
        j["columns"] = cols;
        j["rows"] = json::array();
        for (const auto& r : rows) {
            std::istringstream rs(r);
            json row = json::array();
            for (std::string c; std::getline(rs, c, ',');) row.push_back(c);
            j["rows"].push_back(row);
        }
        j["trailer"] = trailer;
        return j;
    }
};

struct OutputOpts {
    std::string path;
    std::string format = "csv";
};

void emit(const Table& table, const OutputOpts& out) {
    const std::string text =
        out.format == "json" ? table.render_json().dump(2) + "\n" : table.render_csv();
    std::cout << text;
    if (!out.path.empty()) {
        std::ofstream f(out.path, std::ios::binary);
        f << text;
    }
}

void add_output_flags(CLI::App* cmd, OutputOpts& out) {
    cmd->set_config("--config", "", "key=value configuration file; flags take precedence");
    cmd->add_option("--output", out.path, "also write the result to this file");
    cmd->add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

std::string meta_version() { return std::string("qzeta-tool ") + kToolVersion; }

// ---------------------------------------------------------------- eval

struct EvalOpts {
    std::string kind = "zeta";
    std::string s_text = "0,0";
    std::string t_text;
    std::string chi_src;
    std::string strategy = "auto";
    int nu = 1;
    int mu = 1;
    double q = 0.5;
    double a = 1.0;
    double tol = 1e-12;
    double target = 1e-5;
    OutputOpts out;
};

int cmd_eval(const EvalOpts& o) {
    const qzeta::QParam qp(o.q);
    const Cx s = parse_complex(o.s_text);
    std::optional<qzeta::DirichletCharacter> chi;
    if (!o.chi_src.empty()) chi = load_character(o.chi_src);

    qzeta::EvalOutput res;
    if (o.kind == "tsumura") {
        res.value = qzeta::tsumura_zeta(s, o.mu, o.a, qp, o.tol);
        res.strategy = qzeta::Strategy::DIRECT;
    } else {
        qzeta::SeriesSpec spec;
        if (o.kind == "zeta") {
            spec = qzeta::zeta_nu_spec(s, o.nu);
        } else if (o.kind == "L") {
            if (!chi) throw CLI::ValidationError("--chi", "kind L needs a character");
            spec = qzeta::l_nu_spec(s, o.nu, *chi);
        } else if (o.kind == "f") {
            if (o.t_text.empty()) throw CLI::ValidationError("--t", "kind f needs t");
            spec = qzeta::f_chi_spec(s, parse_complex(o.t_text),
                                     chi ? *chi : qzeta::principal_character(1));
        } else { // g
            if (o.t_text.empty()) throw CLI::ValidationError("--t", "kind g needs t");
            spec = qzeta::g_hurwitz_spec(s, parse_complex(o.t_text), o.a);
        }

        std::string strat = o.strategy;
        if (strat == "auto")
            strat = (o.kind == "f" || o.kind == "g") ? "direct" : "expansion";
        if (strat == "direct") {
            res = qzeta::f_direct(spec, qp, o.tol);
        } else if (strat == "expansion") {
            res = qzeta::zeta_expansion(spec, qp, o.tol);
        } else { // em
            if (o.kind != "zeta")
                throw CLI::ValidationError("--strategy", "em applies to kind zeta only");
            const qzeta::EvalParams p = qzeta::auto_params(s, o.nu, qp, o.target);
            res = qzeta::zeta_em(s, o.nu, qp, p);
        }
    }

    Table t;
    t.meta = {meta_version(),
              "command=eval kind=" + o.kind + " s=" + o.s_text + " q=" + format_double(o.q) +
                  " nu=" + std::to_string(o.nu) + " mu=" + std::to_string(o.mu) +
                  " a=" + format_double(o.a) + " tol=" + format_double(o.tol) +
                  " strategy=" + strategy_name(res.strategy)};
    t.header = "re,im,bound,strategy,terms";
    t.rows = {format_double(res.value.real()) + "," + format_double(res.value.imag()) + "," +
              (res.bound ? format_double(*res.bound) : std::string()) + "," +
              strategy_name(res.strategy) + "," + std::to_string(res.terms_used)};
    emit(t, o.out);
    return 0;
}

// ---------------------------------------------------------- trajectory

struct TrajectoryOpts {
    std::string origin = "trivial:1";
    std::string schedule = "paper";
    int nu = 1;
    double tol = 1e-8;
    OutputOpts out;
};

Cx parse_origin(const std::string& text) {
    if (text.rfind("trivial:", 0) == 0)
        return qzeta::reference::trivial_zero(std::stoi(text.substr(8)));
    if (text.rfind("rho:", 0) == 0)
        return qzeta::reference::nontrivial_zero(std::stoi(text.substr(4)));
    return parse_complex(text);
}

qzeta::QSchedule parse_schedule(const std::string& text) {
    if (text == "paper") return qzeta::QSchedule::paper();
    std::ifstream in(text);
    if (!in) throw CLI::ValidationError("--schedule", "cannot open schedule file: " + text);
    qzeta::QSchedule sched;
    for (double v; in >> v;) sched.points.push_back(v);
    sched.validate();
    return sched;
}

int cmd_trajectory(const TrajectoryOpts& o) {
    const Cx origin = parse_origin(o.origin);
    const qzeta::QSchedule sched = parse_schedule(o.schedule);
    const qzeta::Trajectory traj = qzeta::track_trajectory(o.nu, origin, sched, o.tol);

    Table t;
    t.meta = {meta_version(), "command=trajectory origin=" + o.origin +
                                  " nu=" + std::to_string(o.nu) + " schedule=" + o.schedule +
                                  " tol=" + format_double(o.tol)};
    t.header = "q,re_s,im_s,residual,status,newton_iters,slope_estimate";
    const qzeta::TrajectoryPoint* prev = nullptr;
    for (const auto& pt : traj.points) {
        std::string slope;
        if (prev && pt.q != prev->q)
            slope = format_double(std::abs(pt.zero.s - prev->zero.s) /
                                  std::abs(pt.q - prev->q));
        t.rows.push_back(format_double(pt.q) + "," + format_double(pt.zero.s.real()) + "," +
                         format_double(pt.zero.s.imag()) + "," +
                         format_double(pt.zero.residual) + "," + status_name(pt.status) + "," +
                         std::to_string(pt.zero.iterations) + "," + slope);
        prev = &pt;
    }
    try {
        const qzeta::CrystalClass c = qzeta::crystal_classifier(traj);
        t.trailer = {"classifier nearest_integer=" + std::to_string(c.nearest_integer) +
                     " final_distance=" + format_double(c.final_distance) +
                     " tangency_slope=" + format_double(c.tangency_slope)};
    } catch (const qzeta::Error& e) {
        t.trailer = {std::string("classifier unavailable: ") + e.what()};
    }
    emit(t, o.out);
    return 0;
}

// ---------------------------------------------------------------- scan

struct ScanOpts {
    std::string rect = "-1,0,1,1";
    std::string grid = "10,10";
    std::string mode = "field";
    int nu = 1;
    double q = 0.5;
    OutputOpts out;
};

int cmd_scan(const ScanOpts& o) {
    std::vector<double> r;
    {
        std::istringstream in(o.rect);
        for (std::string tok; std::getline(in, tok, ',');) r.push_back(std::stod(tok));
    }
    if (r.size() != 4) throw CLI::ValidationError("--rect", "expected RE1,IM1,RE2,IM2");
    int nx = 0, ny = 0;
    if (std::sscanf(o.grid.c_str(), "%d,%d", &nx, &ny) != 2 || nx < 2 || ny < 2)
        throw CLI::ValidationError("--grid", "expected NX,NY with both >= 2");

    const qzeta::QParam qp(o.q);
    const auto mode =
        o.mode == "candidates" ? qzeta::ScanMode::CANDIDATES : qzeta::ScanMode::FIELD;
    const qzeta::ScanResult res =
        qzeta::scan_rectangle(o.nu, qp, Cx(r[0], r[1]), Cx(r[2], r[3]), nx, ny, mode);

    Table t;
    t.meta = {meta_version(),
              "command=scan mode=" + o.mode + " q=" + format_double(o.q) +
                  " nu=" + std::to_string(o.nu) + " rect=" + o.rect + " grid=" + o.grid,
              "re0=" + format_double(res.re0) + " re1=" + format_double(res.re1) +
                  " im0=" + format_double(res.im0) + " im1=" + format_double(res.im1)};
    if (res.clipped) t.meta.push_back("warning: rect clipped at the zero-free region Re(s) >= 2 nu");
    if (res.grid_too_coarse) t.meta.push_back("warning: grid too coarse, candidate cells touch");

    if (mode == qzeta::ScanMode::FIELD) {
        for (int iy = 0; iy < res.ny; ++iy) {
            std::string row;
            for (int ix = 0; ix < res.nx; ++ix) {
                if (ix) row += ',';
                row += format_double(res.field[static_cast<size_t>(iy) *
                                                   static_cast<size_t>(res.nx) +
                                               static_cast<size_t>(ix)]);
            }
            t.rows.push_back(row);
        }
    } else {
        t.header = "ix,iy,center_re,center_im,zero_re,zero_im,residual";
        for (const auto& cell : res.candidates) {
            std::string refined = ",,";
            try {
                const qzeta::Zero z = qzeta::find_complex_zero(o.nu, qp, cell.center);
                refined = format_double(z.s.real()) + "," + format_double(z.s.imag()) + "," +
                          format_double(z.residual);
            } catch (const qzeta::Error&) {
            }
            t.rows.push_back(std::to_string(cell.ix) + "," + std::to_string(cell.iy) + "," +
                             format_double(cell.center.real()) + "," +
                             format_double(cell.center.imag()) + "," + refined);
        }
    }
    emit(t, o.out);
    return 0;
}

// ----------------------------------------------- crystal and special

struct PointOpts {
    std::string s_text = "0,0";
    std::string chi_src;
    int m = 0;
    int nu = 1;
    double q = 0.5;
    OutputOpts out;
};

int cmd_crystal(const PointOpts& o) {
    const auto chi =
        o.chi_src.empty() ? qzeta::principal_character(1) : load_character(o.chi_src);
    const Cx v = qzeta::crystal_value(parse_complex(o.s_text), o.nu, chi);
    Table t;
    t.meta = {meta_version(), "command=crystal s=" + o.s_text + " nu=" + std::to_string(o.nu)};
    t.header = "re,im";
    t.rows = {format_double(v.real()) + "," + format_double(v.imag())};
    emit(t, o.out);
    return 0;
}

int cmd_special(const PointOpts& o) {
    const auto chi =
        o.chi_src.empty() ? qzeta::principal_character(1) : load_character(o.chi_src);
    const Cx v = qzeta::special_value_neg_int(o.m, o.nu, chi, qzeta::QParam(o.q));
    Table t;
    t.meta = {meta_version(), "command=special m=" + std::to_string(o.m) +
                                  " nu=" + std::to_string(o.nu) + " q=" + format_double(o.q)};
    t.header = "re,im";
    t.rows = {format_double(v.real()) + "," + format_double(v.imag())};
    emit(t, o.out);
    return 0;
}

// --------------------------------------------------- compare-classical

struct CompareOpts {
    std::string kind = "zeta";
    std::string s_text = "2,0";
    std::string q_list = "0.9,0.99,0.999";
    std::string chi_src;
    int nu = 1;
    OutputOpts out;
};

int cmd_compare_classical(const CompareOpts& o) {
    const Cx s = parse_complex(o.s_text);
    std::optional<qzeta::DirichletCharacter> chi;
    if (!o.chi_src.empty()) chi = load_character(o.chi_src);
    if (o.kind == "L" && !chi) throw CLI::ValidationError("--chi", "kind L needs a character");

    const Cx classical = o.kind == "L" ? qzeta::reference::dirichlet_L(s, *chi)
                                       : qzeta::reference::riemann_zeta(s);
    Table t;
    t.meta = {meta_version(), "command=compare-classical kind=" + o.kind + " s=" + o.s_text +
                                  " nu=" + std::to_string(o.nu) + " q-list=" + o.q_list};
    t.header = "q,re,im,classical_re,classical_im,abs_err";
    std::istringstream in(o.q_list);
    for (std::string tok; std::getline(in, tok, ',');) {
        const double q = std::stod(tok);
        const qzeta::SeriesSpec spec = o.kind == "L" ? qzeta::l_nu_spec(s, o.nu, *chi)
                                                     : qzeta::zeta_nu_spec(s, o.nu);
        const Cx v = qzeta::zeta_expansion(spec, qzeta::QParam(q)).value;
        t.rows.push_back(format_double(q) + "," + format_double(v.real()) + "," +
                         format_double(v.imag()) + "," + format_double(classical.real()) + "," +
                         format_double(classical.imag()) + "," +
                         format_double(std::abs(v - classical)));
    }
    emit(t, o.out);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"q-deformed zeta function evaluator"};
    app.require_subcommand(1);

    EvalOpts eo;
    CLI::App* eval = app.add_subcommand("eval", "evaluate one series member");
    eval->add_option("--kind", eo.kind)->check(CLI::IsMember({"zeta", "L", "f", "g", "tsumura"}));
    eval->add_option("--s", eo.s_text, "point as RE,IM");
    eval->add_option("--t", eo.t_text, "exponent parameter t as RE,IM (kinds f, g)");
    eval->add_option("--nu", eo.nu);
    eval->add_option("--mu", eo.mu);
    eval->add_option("--q", eo.q)->check(CLI::Range(1e-300, 1.0 - 1e-16));
    eval->add_option("--a", eo.a, "Hurwitz shift in (0,1]");
    eval->add_option("--chi", eo.chi_src, "character: principal:N or a file");
    eval->add_option("--strategy", eo.strategy)
        ->check(CLI::IsMember({"auto", "direct", "expansion", "em"}));
    eval->add_option("--tol", eo.tol);
    eval->add_option("--target", eo.target, "remainder target for the em strategy");
    add_output_flags(eval, eo.out);

    TrajectoryOpts to;
    CLI::App* traj = app.add_subcommand("trajectory", "track a zero along a q-schedule");
    traj->add_option("--origin", to.origin, "trivial:J, rho:J, or RE,IM");
    traj->add_option("--nu", to.nu);
    traj->add_option("--schedule", to.schedule, "paper or a file of descending q values");
    traj->add_option("--tol", to.tol);
    add_output_flags(traj, to.out);

    ScanOpts so;
    CLI::App* scan = app.add_subcommand("scan", "evaluate over a rectangle lattice");
    scan->add_option("--rect", so.rect, "RE1,IM1,RE2,IM2");
    scan->add_option("--grid", so.grid, "NX,NY");
    scan->add_option("--q", so.q)->check(CLI::Range(1e-300, 1.0 - 1e-16));
    scan->add_option("--nu", so.nu);
    scan->add_option("--mode", so.mode)->check(CLI::IsMember({"field", "candidates"}));
    add_output_flags(scan, so.out);

    PointOpts co;
    CLI::App* crystal = app.add_subcommand("crystal", "crystal (q -> 0) limit value");
    crystal->add_option("--s", co.s_text);
    crystal->add_option("--nu", co.nu);
    crystal->add_option("--chi", co.chi_src);
    add_output_flags(crystal, co.out);

    PointOpts po;
    CLI::App* special = app.add_subcommand("special", "special value at s = -m");
    special->add_option("--m", po.m)->check(CLI::NonNegativeNumber);
    special->add_option("--nu", po.nu);
    special->add_option("--q", po.q)->check(CLI::Range(1e-300, 1.0 - 1e-16));
    special->add_option("--chi", po.chi_src);
    add_output_flags(special, po.out);

    CompareOpts mo;
    CLI::App* cmp = app.add_subcommand("compare-classical", "q up to 1 sweep against the classical value");
    cmp->add_option("--kind", mo.kind)->check(CLI::IsMember({"zeta", "L"}));
    cmp->add_option("--s", mo.s_text);
    cmp->add_option("--nu", mo.nu);
    cmp->add_option("--q-list", mo.q_list, "comma-separated ascending q values");
    cmp->add_option("--chi", mo.chi_src);
    add_output_flags(cmp, mo.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eval->parsed()) return cmd_eval(eo);
        if (traj->parsed()) return cmd_trajectory(to);
        if (scan->parsed()) return cmd_scan(so);
        if (crystal->parsed()) return cmd_crystal(co);
        if (special->parsed()) return cmd_special(po);
        if (cmp->parsed()) return cmd_compare_classical(mo);
    } catch (const qzeta::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace qzeta_cli
