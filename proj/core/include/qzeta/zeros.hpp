#pragma once

#include <string>
#include <vector>

#include "qzeta/qzeta.hpp"

namespace qzeta {

enum class ZeroMethod { BISECTION, NEWTON, GRID };

struct Zero {
    Cx s;
    double q = 0.0;
    int nu = 1;
    double residual = 0.0; // |zeta_q^{(nu)}(s)| at the reported point
    ZeroMethod method = ZeroMethod::NEWTON;
    int iterations = 0;
};

// Descending q values in (0,1).
struct QSchedule {
    std::vector<double> points;

    void validate() const; // strictly decreasing, all in (0,1)

    // 0.99 down to 0.01 by 0.01, then 0.001, 0.0001, 0.00001.
    static QSchedule paper();
};

enum class PointStatus { CONVERGED, REFINED_AFTER_RESTART, LOST };

struct TrajectoryPoint {
    double q = 0.0;
    Zero zero;
    PointStatus status = PointStatus::CONVERGED;
    std::string note; // diagnostics for LOST points
};

struct Trajectory {
    int nu = 1;
    Cx origin; // the q = 1 zero the run starts from
    std::vector<TrajectoryPoint> points;
};

// Bisection on the real axis. The bracket must avoid the poles {1..nu}
// and stay inside Re(s) < 2 nu (zeros cannot exist beyond).
Zero find_real_zero(int nu, const QParam& q, double lo, double hi, double tol = 1e-8);

// Newton from `guess` using the analytic s-derivative; on divergence a
// shrinking sign-change grid recenters the guess before re-entering
// Newton.
Zero find_complex_zero(int nu, const QParam& q, Cx guess, double tol = 1e-8,
                       int max_iter = 50);

// Continuation along the schedule, previous zero seeding the next q.
// A step whose zero moves more than 10x the previous step is treated
// as a jump to an impostor (delta-translated) zero and retried through
// geometric q-subdivision; unrecoverable points are marked LOST and
// the run continues from the last good zero.
Trajectory track_trajectory(int nu, Cx origin, const QSchedule& schedule, double tol = 1e-8);

enum class ScanMode { CANDIDATES, FIELD };

struct ScanCell {
    int ix = 0, iy = 0;  // lower-left sample index of the cell
    Cx center;
};

struct ScanResult {
    int nx = 0, ny = 0;          // sample counts per axis
    double re0 = 0, re1 = 0, im0 = 0, im1 = 0;
    std::vector<double> field;   // log10|zeta|, row-major [iy*nx+ix]; NaN = skipped
    std::vector<ScanCell> candidates;
    bool clipped = false;          // rect intersected Re(s) >= 2 nu
    bool grid_too_coarse = false;  // adjacent candidate cells touched
};

// Lattice evaluation over [re0,re1] x [im0,im1] with nx-by-ny samples.
// FIELD keeps the full log-magnitude grid; CANDIDATES lists cells where
// Re and Im both change sign. Pole-adjacent samples are skipped.
ScanResult scan_rectangle(int nu, const QParam& q, Cx corner1, Cx corner2, int nx, int ny,
                          ScanMode mode);

struct CrystalClass {
    int nearest_integer = 0;
    double final_distance = 0.0;
    double tangency_slope = 0.0; // |ds/dq| over the last two points
};

// Classify the trajectory endpoint against the integer crystal limits;
// needs at least 3 non-LOST points at the small-q end.
CrystalClass crystal_classifier(const Trajectory& traj);

} // namespace qzeta
