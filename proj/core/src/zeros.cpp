#include "qzeta/zeros.hpp"

#include <cmath>
#include <limits>
#include <tuple>
#include <optional>
#include <sstream>

namespace qzeta {

void QSchedule::validate() const {
    if (points.empty()) throw DomainError("QSchedule: empty schedule");
    double prev = 1.0;
    for (double q : points) {
        if (!(q > 0.0 && q < 1.0)) throw DomainError("QSchedule: q values must lie in (0,1)");
        if (!(q < prev)) throw DomainError("QSchedule: q values must be strictly decreasing");
        prev = q;
    }
}

QSchedule QSchedule::paper() {
    QSchedule s;
    for (int k = 99; k >= 1; --k) s.points.push_back(k / 100.0);
    s.points.push_back(0.001);
    s.points.push_back(0.0001);
    s.points.push_back(0.00001);
    return s;
}

namespace {

Cx eval_zeta(int nu, const QParam& q, Cx s, double tol) {
    return zeta_expansion(zeta_nu_spec(s, nu), q, tol).value;
}

} // namespace

Zero find_real_zero(int nu, const QParam& q, double lo, double hi, double tol) {
    if (nu < 1) throw DomainError("find_real_zero: nu must be >= 1");
    if (!(lo < hi)) throw DomainError("find_real_zero: needs lo < hi");
    if (hi >= 2.0 * nu)
        throw EnteredZeroFreeRegion("find_real_zero: bracket reaches Re(s) >= 2 nu");
    // Real simple poles sit at s = 1..nu.
    for (int p = 1; p <= nu; ++p)
        if (lo <= p && p <= hi)
            throw BracketContainsPole("find_real_zero: bracket contains a pole in {1..nu}");

    const double inner_tol = std::min(tol, 1e-10);
    auto f = [&](double x) { return eval_zeta(nu, q, Cx(x, 0.0), inner_tol).real(); };
    double flo = f(lo), fhi = f(hi);
    int iters = 2;
    if (flo == 0.0) return {Cx(lo, 0.0), q.q(), nu, 0.0, ZeroMethod::BISECTION, iters};
    if (fhi == 0.0) return {Cx(hi, 0.0), q.q(), nu, 0.0, ZeroMethod::BISECTION, iters};
    if ((flo > 0.0) == (fhi > 0.0))
        throw NoSignChange("find_real_zero: endpoints have the same sign");

    double mid = 0.5 * (lo + hi), fmid = 0.0;
    while (hi - lo > tol) {
        mid = 0.5 * (lo + hi);
        fmid = f(mid);
        ++iters;
        if (fmid == 0.0) break;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if (iters > 200) break;
    }
    return {Cx(mid, 0.0), q.q(), nu, std::abs(fmid), ZeroMethod::BISECTION, iters};
}

namespace {

// One round of sign-change grid refinement around `center`: samples a
// (2m+1)^2 lattice of half-width h and returns the center of the cell
// nearest to `center` where Re and Im both change sign.
std::optional<Cx> grid_refine(int nu, const QParam& q, Cx center, double h, double tol) {
    constexpr int m = 8; // samples per axis: m + 1
    std::vector<Cx> vals(static_cast<size_t>((m + 1) * (m + 1)));
    std::vector<char> ok(vals.size(), 0);
    const double step = 2.0 * h / m;
    for (int iy = 0; iy <= m; ++iy)
        for (int ix = 0; ix <= m; ++ix) {
            Cx s = center + Cx(-h + ix * step, -h + iy * step);
            try {
                vals[static_cast<size_t>(iy * (m + 1) + ix)] = eval_zeta(nu, q, s, tol);
                ok[static_cast<size_t>(iy * (m + 1) + ix)] = 1;
            } catch (const Error&) {
                // pole-adjacent sample: skip the surrounding cells
            }
        }
    std::optional<Cx> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix) {
            const int idx[4] = {iy * (m + 1) + ix, iy * (m + 1) + ix + 1,
                                (iy + 1) * (m + 1) + ix, (iy + 1) * (m + 1) + ix + 1};
            bool valid = true;
            for (int c : idx) valid = valid && ok[static_cast<size_t>(c)];
            if (!valid) continue;
            bool re_pos = false, re_neg = false, im_pos = false, im_neg = false;
            for (int c : idx) {
                const Cx v = vals[static_cast<size_t>(c)];
                (v.real() >= 0.0 ? re_pos : re_neg) = true;
                (v.imag() >= 0.0 ? im_pos : im_neg) = true;
            }
            if (!(re_pos && re_neg && im_pos && im_neg)) continue;
            Cx cell_center = center + Cx(-h + (ix + 0.5) * step, -h + (iy + 0.5) * step);
            double d = std::abs(cell_center - center);
            if (d < best_dist) {
                best_dist = d;
                best = cell_center;
            }
        }
    return best;
}

} // namespace

Zero find_complex_zero(int nu, const QParam& q, Cx guess, double tol, int max_iter) {
    if (nu < 1) throw DomainError("find_complex_zero: nu must be >= 1");
    if (guess.real() >= 2.0 * nu)
        throw EnteredZeroFreeRegion("find_complex_zero: guess inside Re(s) >= 2 nu");

    const double inner_tol = std::min(tol * 1e-3, 1e-12);
    Cx s = guess;
    int iters = 0;
    ZeroMethod method = ZeroMethod::NEWTON;

    for (int round = 0; round < 3; ++round) {
        // Newton phase.
        bool diverged = false;
        for (int it = 0; it < max_iter; ++it) {
            ++iters;
            Cx f, df;
            try {
                std::tie(f, df) = zeta_and_ds(zeta_nu_spec(s, nu), q, inner_tol);
            } catch (const Error&) {
                diverged = true;
                break;
            }
            if (std::abs(f) < tol) {
                if (s.real() >= 2.0 * nu)
                    throw EnteredZeroFreeRegion(
                        "find_complex_zero: converged into Re(s) >= 2 nu");
                return {s, q.q(), nu, std::abs(f), method, iters};
            }
            if (std::abs(df) == 0.0) {
                diverged = true;
                break;
            }
            const Cx step = f / df;
            if (!is_finite(s - step) || std::abs(step) > 3.0) {
                diverged = true;
                break;
            }
            s -= step;
        }
        (void)diverged;

        // Grid phase: shrink toward a cell where both components flip.
        Cx center = is_finite(s) ? s : guess;
        double h = 0.3;
        bool any = false;
        for (int shrink = 0; shrink < 24 && h > 0.25 * tol; ++shrink) {
            auto cell = grid_refine(nu, q, center, h, inner_tol);
            ++iters;
            if (!cell) break;
            center = *cell;
            h *= 0.35;
            any = true;
        }
        if (!any)
            throw NotConverged("find_complex_zero: Newton diverged and no sign-change cell found");
        s = center;
        method = ZeroMethod::GRID;
        try {
            const Cx f = eval_zeta(nu, q, s, inner_tol);
            if (std::abs(f) < tol) {
                if (s.real() >= 2.0 * nu)
                    throw EnteredZeroFreeRegion(
                        "find_complex_zero: converged into Re(s) >= 2 nu");
                return {s, q.q(), nu, std::abs(f), method, iters};
            }
        } catch (const PoleProximity&) {
            throw NotConverged("find_complex_zero: refinement landed on a pole");
        }
        // loop back into Newton from the refined center
    }
    throw NotConverged("find_complex_zero: iteration budget exhausted");
}

namespace {

struct Advance {
    std::optional<Zero> zero;
    bool subdivided = false;
    std::string note;
};

void advance_step(int nu, double q_from, Cx s_from, double q_to, double allowance, double tol,
                  int depth, Advance& out) {
    try {
        Zero z = find_complex_zero(nu, QParam(q_to), s_from, tol);
        if (std::abs(z.s - s_from) <= allowance) {
            out.zero = z;
            return;
        }
        out.note = "jump threshold exceeded";
    } catch (const Error& e) {
        out.note = e.what();
    }
    if (depth == 0) {
        out.zero.reset();
        return;
    }
    out.subdivided = true;
    const double q_mid = std::sqrt(q_from * q_to);
    if (!(q_mid < q_from && q_mid > q_to)) {
        out.zero.reset();
        return;
    }
    advance_step(nu, q_from, s_from, q_mid, allowance, tol, depth - 1, out);
    if (!out.zero) return;
    const Cx s_mid = out.zero->s;
    advance_step(nu, q_mid, s_mid, q_to, allowance, tol, depth - 1, out);
}

} // namespace

Trajectory track_trajectory(int nu, Cx origin, const QSchedule& schedule, double tol) {
    schedule.validate();
    if (nu < 1) throw DomainError("track_trajectory: nu must be >= 1");

    Trajectory traj;
    traj.nu = nu;
    traj.origin = origin;

    Cx prev_s = origin;
    double prev_q = 1.0;
    double prev_step = std::numeric_limits<double>::infinity();

    for (double qv : schedule.points) {
        const double allowance =
            std::isfinite(prev_step) ? std::max(10.0 * prev_step, 0.1)
                                     : std::numeric_limits<double>::infinity();
        Advance adv;
        advance_step(nu, prev_q, prev_s, qv, allowance, tol, 6, adv);

        TrajectoryPoint pt;
        pt.q = qv;
        if (adv.zero) {
            pt.zero = *adv.zero;
            pt.status =
                adv.subdivided ? PointStatus::REFINED_AFTER_RESTART : PointStatus::CONVERGED;
            prev_step = std::abs(pt.zero.s - prev_s);
            prev_s = pt.zero.s;
        } else {
            // Carry the last good point; the run continues from it.
            pt.zero = {prev_s, qv, nu, std::numeric_limits<double>::quiet_NaN(),
                       ZeroMethod::NEWTON, 0};
            pt.status = PointStatus::LOST;
            pt.note = adv.note.empty() ? "no continuation found" : adv.note;
        }
        prev_q = qv;
        traj.points.push_back(std::move(pt));
    }
    return traj;
}

ScanResult scan_rectangle(int nu, const QParam& q, Cx corner1, Cx corner2, int nx, int ny,
                          ScanMode mode) {
    if (nu < 1) throw DomainError("scan_rectangle: nu must be >= 1");
    if (nx < 2 || ny < 2) throw DomainError("scan_rectangle: needs at least 2x2 samples");

    ScanResult res;
    res.nx = nx;
    res.ny = ny;
    res.re0 = std::min(corner1.real(), corner2.real());
    res.re1 = std::max(corner1.real(), corner2.real());
    res.im0 = std::min(corner1.imag(), corner2.imag());
    res.im1 = std::max(corner1.imag(), corner2.imag());

    // Zeros cannot live in Re(s) >= 2 nu; clip with a warning flag.
    const double wall = 2.0 * nu;
    if (res.re1 >= wall) {
        res.clipped = true;
        res.re1 = wall - 1e-9;
        if (res.re0 >= res.re1) {
            res.field.clear();
            return res; // rectangle entirely inside the zero-free region
        }
    }

    const double dx = (res.re1 - res.re0) / (nx - 1);
    const double dy = (res.im1 - res.im0) / (ny - 1);
    std::vector<Cx> vals(static_cast<size_t>(nx) * ny);
    std::vector<char> ok(vals.size(), 0);
    res.field.assign(vals.size(), std::numeric_limits<double>::quiet_NaN());
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const Cx s(res.re0 + ix * dx, res.im0 + iy * dy);
            const size_t idx = static_cast<size_t>(iy) * nx + ix;
            try {
                vals[idx] = eval_zeta(nu, q, s, 1e-12);
                ok[idx] = 1;
                res.field[idx] = std::log10(std::abs(vals[idx]));
            } catch (const Error&) {
                // pole row: skipped sample
            }
        }

    for (int iy = 0; iy + 1 < ny; ++iy)
        for (int ix = 0; ix + 1 < nx; ++ix) {
            const size_t idx[4] = {static_cast<size_t>(iy) * nx + ix,
                                   static_cast<size_t>(iy) * nx + ix + 1,
                                   static_cast<size_t>(iy + 1) * nx + ix,
                                   static_cast<size_t>(iy + 1) * nx + ix + 1};
            bool valid = true;
            for (size_t c : idx) valid = valid && ok[c];
            if (!valid) continue;
            bool re_pos = false, re_neg = false, im_pos = false, im_neg = false;
            for (size_t c : idx) {
                (vals[c].real() >= 0.0 ? re_pos : re_neg) = true;
                (vals[c].imag() >= 0.0 ? im_pos : im_neg) = true;
            }
            if (!(re_pos && re_neg && im_pos && im_neg)) continue;
            ScanCell cell;
            cell.ix = ix;
            cell.iy = iy;
            cell.center = Cx(res.re0 + (ix + 0.5) * dx, res.im0 + (iy + 0.5) * dy);
            res.candidates.push_back(cell);
        }

    // Advisory: adjacent candidate cells mean the grid cannot separate
    // the zeros it found.
    for (size_t i = 0; i < res.candidates.size() && !res.grid_too_coarse; ++i)
        for (size_t j = i + 1; j < res.candidates.size(); ++j) {
            if (std::abs(res.candidates[i].ix - res.candidates[j].ix) <= 1 &&
                std::abs(res.candidates[i].iy - res.candidates[j].iy) <= 1) {
                res.grid_too_coarse = true;
                break;
            }
        }

    if (mode == ScanMode::CANDIDATES) res.field.clear();
    return res;
}

CrystalClass crystal_classifier(const Trajectory& traj) {
    const auto& pts = traj.points;
    if (pts.size() < 3)
        throw InsufficientData("crystal_classifier: needs at least 3 trajectory points");
    for (size_t i = pts.size() - 3; i < pts.size(); ++i)
        if (pts[i].status == PointStatus::LOST)
            throw InsufficientData(
                "crystal_classifier: trajectory LOST within its last 3 points");

    const TrajectoryPoint& last = pts[pts.size() - 1];
    const TrajectoryPoint& prev = pts[pts.size() - 2];
    CrystalClass out;
    out.nearest_integer = static_cast<int>(std::lround(last.zero.s.real()));
    out.final_distance = std::abs(last.zero.s - Cx(out.nearest_integer, 0.0));
    out.tangency_slope = std::abs(last.zero.s - prev.zero.s) / (prev.q - last.q);
    return out;
}

} // namespace qzeta
