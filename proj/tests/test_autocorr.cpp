#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modelset/autocorr.hpp"
#include "modelset/errors.hpp"
#include "modelset/presets.hpp"

using namespace modelset;

namespace {

QuadraticNumber q(long long v) { return QuadraticNumber(v); }

MultiSetPatch fib_patch(double radius) {
    auto cfg = preset_fibonacci();
    return cfg.scheme.enumerate_model_set(cfg.windows, Box::cube(1, radius),
                                          BoundaryPolicy::Flags);
}

// brute-force symmetric difference count, independent of d_empirical's merge
double symdiff_oracle(const MultiSetPatch& a, const MultiSetPatch& b, double radius) {
    Box box = Box::cube(1, radius);
    size_t count = 0;
    for (int c = 0; c < a.colour_count(); ++c) {
        for (const auto& p : a.colour(c)) {
            if (!box.contains({p.pos[0]})) continue;
            if (!b.point_in(c, p)) ++count;
        }
        for (const auto& p : b.colour(c)) {
            if (!box.contains({p.pos[0]})) continue;
            if (!a.point_in(c, p)) ++count;
        }
    }
    return static_cast<double>(count) / (2 * radius);
}

}  // namespace

TEST_CASE("empirical distance basics") {
    auto p = fib_patch(400);
    AveragingSequence seq = AveragingSequence::geometric_to(1, 400.0, 4);
    auto zero = d_empirical(p, p, seq);
    for (double v : zero.partials) CHECK(v == 0.0);
    CHECK(zero.converged);

    // against the empty multi-set: d equals the density, identical counting
    std::vector<PatchPoint> none;
    MultiSetPatch empty(1, p.region(), {none});
    auto dens = density_estimate(p, seq);
    auto d = d_empirical(p, empty, seq);
    for (int j = 0; j < seq.size(); ++j)
        CHECK(std::abs(d.partials[j] - dens[0].per_j[j]) <= 1e-12);

    // symmetry is exact
    QuadraticNumber tau(Rational(1, 2), Rational(1, 2), 5);
    auto shifted = p.translate_restrict({tau}, Box::cube(1, 395.0));
    MultiSetPatch p_small = p.translate_restrict({q(0)}, Box::cube(1, 395.0));
    AveragingSequence seq2 = AveragingSequence::geometric_to(1, 395.0, 4);
    auto ab = d_empirical(p_small, shifted, seq2);
    auto ba = d_empirical(shifted, p_small, seq2);
    CHECK(ab.partials == ba.partials);
}

TEST_CASE("empirical distance satisfies the triangle inequality per A_j") {
    auto p1 = fib_patch(300);
    QuadraticNumber tau(Rational(1, 2), Rational(1, 2), 5);
    Box inner = Box::cube(1, 290.0);
    auto p2 = p1.translate_restrict({tau}, inner);
    auto p3 = p1.translate_restrict({q(1)}, inner);
    auto p1r = p1.translate_restrict({q(0)}, inner);
    AveragingSequence seq = AveragingSequence::geometric_to(1, 290.0, 4);
    auto d12 = d_empirical(p1r, p2, seq);
    auto d23 = d_empirical(p2, p3, seq);
    auto d13 = d_empirical(p1r, p3, seq);
    for (int j = 0; j < seq.size(); ++j)
        CHECK(d13.partials[j] <= d12.partials[j] + d23.partials[j] + 1e-9);
}

TEST_CASE("translation invariance of d up to boundary terms") {
    auto p1 = fib_patch(400);
    QuadraticNumber tau(Rational(1, 2), Rational(1, 2), 5);
    Box inner = Box::cube(1, 380.0);
    auto a = p1.translate_restrict({q(0)}, inner);
    auto b = p1.translate_restrict({tau}, inner);
    AveragingSequence seq = AveragingSequence::geometric_to(1, 370.0, 3);
    auto d_ab = d_empirical(a, b, seq);
    // shift both patches by t = 5 and compare: the defect per A_j is bounded by
    // the number of symmetric-difference points inside the shifted boundary zone
    QuadraticNumber t(5);
    Box inner2 = Box::cube(1, 375.0);
    auto at = a.translate_restrict({t}, inner2);
    auto bt = b.translate_restrict({t}, inner2);
    auto d_ab_t = d_empirical(at, bt, seq);
    for (int j = 0; j < seq.size(); ++j) {
        double r = seq.radius(j);
        // count points of either patch within distance |t| of the box boundary
        size_t boundary = 0;
        for (const auto& q2 : a.colour(0)) {
            double x = std::abs(q2.pos[0].to_double());
            if (x >= r - 5 && x <= r + 5) ++boundary;
        }
        for (const auto& q2 : b.colour(0)) {
            double x = std::abs(q2.pos[0].to_double());
            if (x >= r - 5 && x <= r + 5) ++boundary;
        }
        double bound = static_cast<double>(boundary) / (2 * r);
        CHECK(std::abs(d_ab_t.partials[j] - d_ab.partials[j]) <= bound + 1e-12);
    }
}

TEST_CASE("analytic distance: exact values") {
    auto cfg = preset_fibonacci();
    std::array<int64_t, 4> zero{0, 0, 0, 0};
    CHECK(d_analytic_exact(cfg.scheme, cfg.windows,
                           std::span<const int64_t>(zero.data(), 2))
              .is_zero());

    // any t with |phi(t)| >= 1 gives the supremum 2/sqrt5
    std::array<int64_t, 4> e1{1, 0, 0, 0};  // phi = 1
    QuadraticNumber expected = QuadraticNumber(2) / QuadraticNumber(0, 1, 5);
    CHECK(d_analytic_exact(cfg.scheme, cfg.windows, std::span<const int64_t>(e1.data(), 2)) ==
          expected);
    CHECK(d_sup_exact(cfg.scheme, cfg.windows) == expected);

    // phi(t) = tau' + 1 = (3 - sqrt5)/2: d = (3 - sqrt5)/sqrt5, about 0.3416
    std::array<int64_t, 4> t{1, 1, 0, 0};
    QuadraticNumber phi = cfg.scheme.star_map(std::span<const int64_t>(t.data(), 2)).real[0];
    CHECK(phi == QuadraticNumber(Rational(3, 2), Rational(-1, 2), 5));
    QuadraticNumber want = (QuadraticNumber(3) - QuadraticNumber(0, 1, 5)) / QuadraticNumber(0, 1, 5);
    CHECK(d_analytic_exact(cfg.scheme, cfg.windows, std::span<const int64_t>(t.data(), 2)) == want);
    CHECK(d_analytic(cfg.scheme, cfg.windows, std::span<const int64_t>(t.data(), 2)) ==
          doctest::Approx(0.3416407865));
}

TEST_CASE("analytic and empirical distances agree") {
    auto cfg = preset_fibonacci();
    double radius = 2000;
    auto base = fib_patch(radius + 10);
    AveragingSequence seq = AveragingSequence::geometric_to(1, radius, 4);
    QuadraticNumber d_sup = d_sup_exact(cfg.scheme, cfg.windows);

    std::array<int64_t, 4> t{1, 1, 0, 0};  // phi about 0.382
    std::vector<QuadraticNumber> tvec{base.region().axes()[0].lo * QuadraticNumber(0)};
    tvec[0] = cfg.scheme.physical_of(std::span<const int64_t>(t.data(), 2))[0];
    auto translated = base.translate_restrict(tvec, Box::cube(1, radius), &t);
    auto restricted = base.translate_restrict({q(0)}, Box::cube(1, radius));
    auto emp = d_empirical(restricted, translated, seq);
    double ana = d_analytic(cfg.scheme, cfg.windows, std::span<const int64_t>(t.data(), 2));
    CHECK(std::abs(emp.value - ana) <= 0.02 * d_sup.to_double());

    // cross-check the counting path against an independent scan
    CHECK(emp.value == doctest::Approx(symdiff_oracle(restricted, translated, radius)));
}

TEST_CASE("ball radius modulus for single-interval windows") {
    auto cfg = preset_fibonacci();
    auto rho = ball_radius_exact(cfg.scheme, cfg.windows, 0.1);
    REQUIRE(rho.has_value());
    // d(u) = 2u/sqrt5 < eps  <=>  u < eps*sqrt5/2 (eps taken exactly as the
    // rational value of the double 0.1)
    QuadraticNumber want = QuadraticNumber(Rational(0.1)) * QuadraticNumber(0, 1, 5) /
                           QuadraticNumber(2);
    CHECK(*rho == want);
    CHECK(rho->to_double() == doctest::Approx(0.1118033989));
    // at or above the sup there is no finite ball
    CHECK(!ball_radius_exact(cfg.scheme, cfg.windows, 2.0).has_value());
}

TEST_CASE("P_epsilon: exact filter, star-image identity, relative denseness") {
    auto cfg = preset_fibonacci();
    Box region = Box::cube(1, 2000.0);
    auto res = p_epsilon(cfg.scheme, cfg.windows, 0.1, region);
    CHECK(!res.all_of_g);
    CHECK(res.points.size() > 10);
    CHECK(res.identity_checked);
    CHECK(res.identity_holds);
    CHECK(res.max_gap > 0);
    REQUIRE(res.ball_radius.has_value());
    CHECK(*res.ball_radius == doctest::Approx(0.1118033989));
    // every member satisfies d < eps and |phi| < rho, exactly
    for (const auto& t : res.points) {
        QuadraticNumber d =
            d_analytic_exact(cfg.scheme, cfg.windows, std::span<const int64_t>(t.coeffs.data(), 2));
        CHECK(d < QuadraticNumber(Rational(1, 10)));
    }
    // max gap does not grow when the region doubles (the gap alphabet of the
    // almost-period set saturates early)
    auto res2 = p_epsilon(cfg.scheme, cfg.windows, 0.1, Box::cube(1, 4000.0));
    CHECK(res2.max_gap <= res.max_gap + 1e-9);

    // huge epsilon: P_eps = G
    auto all = p_epsilon(cfg.scheme, cfg.windows, 2.0, Box::cube(1, 50.0));
    CHECK(all.all_of_g);
}

TEST_CASE("topology probe on convergents and on the redundant preset") {
    auto cfg = preset_fibonacci();
    // continued-fraction convergents: t = F_{k-1} + F_k tau has small |phi|
    std::vector<std::array<int64_t, 4>> ts;
    int64_t fprev = 1, f = 1;
    for (int i = 0; i < 12; ++i) {
        ts.push_back({fprev, f, 0, 0});
        int64_t next = fprev + f;
        fprev = f;
        f = next;
    }
    auto rep = topology_probe(cfg.scheme, cfg.windows, ts);
    CHECK(rep.modulus_bound_holds);
    CHECK(rep.co_monotone);
    CHECK(rep.entries.front().phi_norm > rep.entries.back().phi_norm);
    CHECK(rep.entries.back().phi_norm < 1e-2);
    CHECK(rep.entries.back().d_value < 1e-2);
    CHECK(!rep.redundancy_witness_label.has_value());

    // constant sequence far out in internal space pins d at the sup
    std::vector<std::array<int64_t, 4>> far{{3, 0, 0, 0}, {3, 0, 0, 0}};
    auto rep2 = topology_probe(cfg.scheme, cfg.windows, far);
    double dsup = d_sup_exact(cfg.scheme, cfg.windows).to_double();
    for (const auto& e : rep2.entries) CHECK(e.d_value == doctest::Approx(dsup));

    // the redundant preset admits s != 0 with d^H(s) = 0 before reduction
    auto red = preset_redundant_k2();
    auto rep3 = topology_probe(red.scheme, red.windows, {});
    REQUIRE(rep3.redundancy_witness_label.has_value());
    CHECK(*rep3.redundancy_witness_label == 1);
    InternalPoint witness{{q(0)}, 1};
    CHECK(internal_distance_exact(red.scheme, red.windows, witness).is_zero());
    // after reduction the witness is gone
    auto [rs, rw] = irredundant_reduction(red.scheme, red.windows);
    auto rep4 = topology_probe(rs, rw, {});
    CHECK(!rep4.redundancy_witness_label.has_value());
}

TEST_CASE("2D distances on the octagonal scheme") {
    auto ab = preset_ammann_beenker();
    std::array<int64_t, 4> t{1, 0, 0, 0};
    double ana = d_analytic(ab.scheme, ab.windows, std::span<const int64_t>(t.data(), 4));
    CHECK(ana > 0);
    CHECK(ana < d_sup(ab.scheme, ab.windows));

    double radius = 10;
    auto base = ab.scheme.enumerate_model_set(ab.windows, Box::cube(2, radius + 2),
                                              BoundaryPolicy::Closure);
    auto tphys = ab.scheme.physical_of(std::span<const int64_t>(t.data(), 4));
    auto translated = base.translate_restrict(tphys, Box::cube(2, radius), &t);
    auto restricted = base.translate_restrict({QuadraticNumber(0), QuadraticNumber(0)},
                                              Box::cube(2, radius));
    AveragingSequence seq = AveragingSequence::geometric_to(2, radius, 3);
    auto emp = d_empirical(restricted, translated, seq);
    CHECK(std::abs(emp.value - ana) <= 0.05 * d_sup(ab.scheme, ab.windows));

    auto pe = p_epsilon(ab.scheme, ab.windows, 0.5, Box::cube(2, 8.0));
    CHECK(!pe.all_of_g);
    CHECK(pe.points.size() > 1);  // contains 0 and nontrivial almost-periods
    for (const auto& p : pe.points)
        CHECK(d_analytic(ab.scheme, ab.windows,
                         std::span<const int64_t>(p.coeffs.data(), 4)) < 0.5 + 1e-9);
}

TEST_CASE("empirical distance needs faithful patches") {
    auto p = fib_patch(50);
    AveragingSequence seq = AveragingSequence::geometric_to(1, 100.0, 3);
    CHECK_THROWS_AS(d_empirical(p, p, seq), PreconditionError);
}
