#include "doctest.h"

#include <cmath>
#include <complex>

#include "qzeta/zeros.hpp"

using qzeta::Cx;
using qzeta::QParam;

TEST_CASE("paper schedule shape") {
    const auto sched = qzeta::QSchedule::paper();
    sched.validate();
    REQUIRE(sched.points.size() == 102);
    CHECK(sched.points.front() == doctest::Approx(0.99));
    CHECK(sched.points[98] == doctest::Approx(0.01));
    CHECK(sched.points[99] == doctest::Approx(0.001));
    CHECK(sched.points.back() == doctest::Approx(0.00001));
    CHECK_THROWS_AS(qzeta::QSchedule({{0.5, 0.7}}).validate(), qzeta::DomainError);
}

TEST_CASE("find_real_zero near the first trivial zero") {
    const QParam qp(0.99);
    const auto z = qzeta::find_real_zero(1, qp, -2.5, -1.5);
    CHECK(z.s.imag() == 0.0);
    CHECK(z.s.real() == doctest::Approx(-2.0).epsilon(0.01));
    CHECK(z.residual < 1e-8);
    CHECK(z.s.real() < 2.0);

    CHECK_THROWS_AS(qzeta::find_real_zero(1, qp, 5.0, 6.0), qzeta::EnteredZeroFreeRegion);
    CHECK_THROWS_AS(qzeta::find_real_zero(1, qp, -1.5, -1.0), qzeta::NoSignChange);
    CHECK_THROWS_AS(qzeta::find_real_zero(1, qp, 0.5, 1.5), qzeta::BracketContainsPole);
}

TEST_CASE("find_complex_zero from the first essential zero") {
    const QParam qp(0.99);
    const Cx rho1(0.5, 14.13472);
    const auto z = qzeta::find_complex_zero(1, qp, rho1);
    CHECK(z.residual < 1e-8);
    CHECK(z.s.real() < 2.0);
    CHECK(std::abs(z.s - rho1) < 0.5);

    // Conjugate guess lands on the conjugate zero.
    const auto zc = qzeta::find_complex_zero(1, qp, std::conj(rho1));
    CHECK(std::abs(zc.s - std::conj(z.s)) < 1e-8);

    CHECK_THROWS_AS(qzeta::find_complex_zero(1, qp, Cx(3.0, 0.0)),
                    qzeta::EnteredZeroFreeRegion);
}

TEST_CASE("reported zeros satisfy an independent re-evaluation") {
    const QParam qp(0.95);
    const auto z = qzeta::find_complex_zero(1, qp, Cx(0.5, 14.13472));
    const Cx check = qzeta::zeta_expansion(qzeta::zeta_nu_spec(z.s, 1), qp).value;
    CHECK(std::abs(check) < 1e-8);
}

TEST_CASE("track_trajectory basics") {
    const qzeta::QSchedule single{{0.99}};
    const auto traj = qzeta::track_trajectory(1, Cx(-2.0), single);
    REQUIRE(traj.points.size() == 1);
    CHECK(traj.points[0].status == qzeta::PointStatus::CONVERGED);
    const auto direct = qzeta::find_complex_zero(1, QParam(0.99), Cx(-2.0));
    CHECK(std::abs(traj.points[0].zero.s - direct.s) < 1e-10);

    // Determinism: identical runs are bit-identical.
    const qzeta::QSchedule sched{{0.99, 0.95, 0.9, 0.85, 0.8}};
    const auto t1 = qzeta::track_trajectory(1, Cx(-2.0), sched);
    const auto t2 = qzeta::track_trajectory(1, Cx(-2.0), sched);
    REQUIRE(t1.points.size() == t2.points.size());
    for (size_t i = 0; i < t1.points.size(); ++i) {
        CHECK(t1.points[i].zero.s.real() == t2.points[i].zero.s.real());
        CHECK(t1.points[i].zero.s.imag() == t2.points[i].zero.s.imag());
    }

    // Conjugate symmetry of whole trajectories.
    const auto tp = qzeta::track_trajectory(1, Cx(0.5, 14.13472), sched);
    const auto tm = qzeta::track_trajectory(1, Cx(0.5, -14.13472), sched);
    REQUIRE(tp.points.size() == tm.points.size());
    for (size_t i = 0; i < tp.points.size(); ++i)
        CHECK(std::abs(tm.points[i].zero.s - std::conj(tp.points[i].zero.s)) < 1e-8);
}

TEST_CASE("scan_rectangle zero-free clipping and candidate refinement") {
    const QParam qp(0.99);
    // Entirely inside the zero-free region: nothing to report.
    const auto empty =
        qzeta::scan_rectangle(1, qp, Cx(2.5, 0.0), Cx(5.0, 30.0), 20, 60,
                              qzeta::ScanMode::CANDIDATES);
    CHECK(empty.candidates.empty());
    CHECK(empty.clipped);

    // A fine grid around rho_1 isolates exactly one candidate cell.
    const auto around =
        qzeta::scan_rectangle(1, qp, Cx(-0.5, 13.5), Cx(1.5, 14.5), 30, 20,
                              qzeta::ScanMode::CANDIDATES);
    REQUIRE(around.candidates.size() == 1);
    const auto z = qzeta::find_complex_zero(1, qp, around.candidates[0].center);
    CHECK(z.residual < 1e-8);
    CHECK(std::abs(z.s - Cx(0.5225, 14.0272)) < 0.01);

    // FIELD keeps the full grid.
    const auto field = qzeta::scan_rectangle(1, qp, Cx(-0.5, 13.5), Cx(1.5, 14.5), 10, 8,
                                             qzeta::ScanMode::FIELD);
    CHECK(field.field.size() == 80);
}

TEST_CASE("grid-scan soundness: found zeros lie in candidate cells") {
    const QParam qp(0.99);
    const auto z = qzeta::find_complex_zero(1, qp, Cx(0.5, 14.13472));
    const auto scan = qzeta::scan_rectangle(1, qp, Cx(-1.0, 13.0), Cx(1.9, 15.0), 40, 30,
                                            qzeta::ScanMode::CANDIDATES);
    const double dx = (scan.re1 - scan.re0) / (scan.nx - 1);
    const double dy = (scan.im1 - scan.im0) / (scan.ny - 1);
    bool covered = false;
    for (const auto& cell : scan.candidates)
        if (std::abs(cell.center.real() - z.s.real()) <= dx &&
            std::abs(cell.center.imag() - z.s.imag()) <= dy)
            covered = true;
    CHECK(covered);
}

TEST_CASE("crystal_classifier arithmetic and failure modes") {
    qzeta::Trajectory traj;
    traj.nu = 1;
    traj.origin = Cx(-2.0);
    auto add = [&traj](double q, Cx s) {
        qzeta::TrajectoryPoint pt;
        pt.q = q;
        pt.zero.s = s;
        pt.zero.q = q;
        pt.status = qzeta::PointStatus::CONVERGED;
        traj.points.push_back(pt);
    };
    add(0.03, Cx(-0.90, 0.03));
    add(0.02, Cx(-0.94, 0.02));
    add(0.01, Cx(-0.98, 0.01));
    const auto c = qzeta::crystal_classifier(traj);
    CHECK(c.nearest_integer == -1);
    CHECK(c.final_distance == doctest::Approx(std::abs(Cx(-0.98, 0.01) - Cx(-1.0))));
    CHECK(c.tangency_slope ==
          doctest::Approx(std::abs(Cx(-0.98, 0.01) - Cx(-0.94, 0.02)) / 0.01));

    qzeta::Trajectory short_traj;
    short_traj.points.assign(traj.points.begin(), traj.points.begin() + 2);
    CHECK_THROWS_AS(qzeta::crystal_classifier(short_traj), qzeta::InsufficientData);
}
