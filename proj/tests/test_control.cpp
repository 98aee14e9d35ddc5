#include "cavlie/control.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cavlie;
using ctrl::ControlSchedule;
using ctrl::Segment;

namespace {

std::mt19937_64 rng(424242);
double unif() { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; }

Vector random_unit(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(unif(), unif());
    return v / v.norm();
}

}  // namespace

TEST_SUITE("control") {

TEST_CASE("empty schedule propagates to the identity") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 3);
    GeneratorSet g = jc_generators(sp);
    auto res = ctrl::propagate({}, g, sp, 2);
    CHECK(max_abs(res.unitary - Matrix::Identity(res.unitary.rows(),
                                                 res.unitary.cols())) == 0.0);
}

TEST_CASE("single level-splitting segment gives sector phases") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 4);
    GeneratorSet g = jc_generators(sp);
    ControlSchedule s;
    s.segments.push_back({"H_JC,1", M_PI, 1.0});
    auto res = ctrl::propagate(s, g, sp, 2);
    Matrix want(2, 2);
    want << std::exp(Complex(0, -M_PI / 2)), 0, 0, std::exp(Complex(0, M_PI / 2));
    for (int mu = 1; mu <= 2; ++mu) {
        Matrix blk = res.unitary.block(sp.offsets[mu], sp.offsets[mu], 2, 2);
        CHECK(max_abs(blk - want) < 1e-13);
    }
}

TEST_CASE("two segments of one generator merge") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 4);
    GeneratorSet g = jc_generators(sp);
    ControlSchedule two, one;
    two.segments.push_back({"H_JC,2", 0.7, 1.0});
    two.segments.push_back({"H_JC,2", 0.4, 1.0});
    one.segments.push_back({"H_JC,2", 1.1, 1.0});
    CHECK(max_abs(ctrl::propagate(two, g, sp, 2).unitary -
                  ctrl::propagate(one, g, sp, 2).unitary) < 1e-10);
}

TEST_CASE("symmetric schedules conserve charge exactly") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 4);
    GeneratorSet g = jc_generators(sp);
    ControlSchedule s;
    s.segments.push_back({"H_JC,1", 0.9, 1.3});
    s.segments.push_back({"H_JC,2", 1.7, -0.4});
    s.segments.push_back({"H_JC,3", 0.6, 0.8});
    auto res = ctrl::propagate(s, g, sp, 3);
    // exact zeros between different sectors (the extended state is its own block)
    auto idx = res.indices;
    for (size_t i = 0; i < idx.size(); ++i) {
        for (size_t j = 0; j < idx.size(); ++j) {
            int si = sp.sector_of(idx[i]), sj = sp.sector_of(idx[j]);
            if (si != sj) CHECK(std::abs(res.unitary(i, j)) == 0.0);
        }
    }
    // symmetric segments discard the intra-sector coupling at the edge
    CHECK(res.segment_leakage[1] > 0.0);
    CHECK(res.segment_leakage[0] == 0.0);
}

TEST_CASE("reversed-and-negated schedules invert the propagator") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 4);
    GeneratorSet g = jc_generators(sp);
    ControlSchedule s;
    s.segments.push_back({"H_JC,2", 0.8, 1.0});
    s.segments.push_back({"H_JC,4", 0.5, 0.7});
    s.segments.push_back({"H_JC,1", 1.2, -0.9});
    s.segments.push_back({"H0", 0.3, 1.0});
    Matrix u = ctrl::propagate(s, g, sp, 2).unitary;
    Matrix v = ctrl::propagate(s.reversed_negated(), g, sp, 2).unitary;
    CHECK(max_abs(u * v - Matrix::Identity(u.rows(), u.cols())) < 1e-9);
}

TEST_CASE("unknown generators are configuration errors") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 3);
    GeneratorSet g = jc_generators(sp);
    ControlSchedule s;
    s.segments.push_back({"H_TC,1", 1.0, 1.0});
    CHECK_THROWS_AS(ctrl::propagate(s, g, sp, 2), ConfigError);
}

TEST_CASE("strong error metric") {
    const int n = 5;
    Matrix u = expm_skew(Matrix::Identity(n, n), 0.0);
    std::vector<Vector> vecs = {random_unit(n), random_unit(n)};
    auto rep = ctrl::strong_error(u, u, vecs, false);
    CHECK(rep.max_error == 0.0);

    Matrix v = std::exp(Complex(0, 1.234)) * u;
    auto rep2 = ctrl::strong_error(u, v, vecs, true);
    CHECK(rep2.max_error < 1e-12);

    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    Vector e0(2);
    e0 << 1, 0;
    auto rep3 = ctrl::strong_error(swap, Matrix::Identity(2, 2), {e0}, false);
    CHECK(rep3.max_error == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("fixed-phase strong error satisfies the triangle inequality") {
    const int n = 4;
    std::vector<Vector> vecs = {random_unit(n), random_unit(n), random_unit(n)};
    for (int trial = 0; trial < 6; ++trial) {
        Matrix a(n, n), b(n, n), c(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                a(i, j) = Complex(unif(), unif());
                b(i, j) = Complex(unif(), unif());
                c(i, j) = Complex(unif(), unif());
            }
        }
        Matrix ua = expm_skew((a + a.adjoint()).eval() / 2, 1.0);
        Matrix ub = expm_skew((b + b.adjoint()).eval() / 2, 1.0);
        Matrix uc = expm_skew((c + c.adjoint()).eval() / 2, 1.0);
        double dab = ctrl::strong_error(ua, ub, vecs, false).max_error;
        double dbc = ctrl::strong_error(ub, uc, vecs, false).max_error;
        double dac = ctrl::strong_error(ua, uc, vecs, false).max_error;
        CHECK(dac <= dab + dbc + 1e-12);
    }
}

TEST_CASE("synthesis recovers a generator exponential") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 4);
    GeneratorSet all = jc_generators(sp);
    GeneratorSet only;
    only.symmetric.emplace_back("H_JC,1", *all.find_symmetric("H_JC,1"));
    only.includes_identity = false;

    ControlSchedule one;
    one.segments.push_back({"H_JC,1", 0.7, 1.0});
    Matrix target = ctrl::propagate(one, all, sp, 2).unitary;

    std::vector<Vector> vecs;
    for (int i = 0; i < 3; ++i) vecs.push_back(random_unit(target.rows()));
    ctrl::SynthesisOptions opts;
    opts.seed = 3;
    opts.restarts = 2;
    auto res = ctrl::synthesize_unitary(target, only, sp, 2, vecs, 1e-10, 4, opts);
    CHECK(res.success);
    CHECK(res.report.max_error < 1e-10);
}

TEST_CASE("synthesis reaches a commutator-generated target") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 4);
    GeneratorSet all = jc_generators(sp);
    GeneratorSet pair;
    pair.symmetric.emplace_back("H_JC,1", *all.find_symmetric("H_JC,1"));
    pair.symmetric.emplace_back("H_JC,2", *all.find_symmetric("H_JC,2"));
    pair.includes_identity = false;

    auto idx = ctrl::propagation_indices(sp, 2);
    Matrix a20 = embed(a_alpha_k(sp, 2, 0));
    Matrix sub(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        for (size_t j = 0; j < idx.size(); ++j) sub(i, j) = a20(idx[i], idx[j]);
    }
    Matrix target = expm_skew(sub, M_PI / 4);

    std::vector<Vector> vecs;
    for (int i = 0; i < 3; ++i) vecs.push_back(random_unit(target.rows()));
    ctrl::SynthesisOptions opts;
    opts.seed = 13;
    opts.restarts = 5;
    opts.max_passes = 80;
    auto res = ctrl::synthesize_unitary(target, pair, sp, 2, vecs, 1e-3, 40, opts);
    CHECK(res.report.max_error < 1e-3);
}

TEST_CASE("synthesis is deterministic under a fixed seed") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 4);
    GeneratorSet g = jc_generators(sp);
    std::vector<Vector> vecs = {random_unit(6), random_unit(6)};
    ControlSchedule one;
    one.segments.push_back({"H_JC,2", 0.9, 1.0});
    Matrix target = ctrl::propagate(one, g, sp, 2).unitary;
    ctrl::SynthesisOptions opts;
    opts.seed = 99;
    opts.restarts = 2;
    opts.max_passes = 10;
    auto r1 = ctrl::synthesize_unitary(target, g, sp, 2, vecs, 1e-6, 12, opts);
    auto r2 = ctrl::synthesize_unitary(target, g, sp, 2, vecs, 1e-6, 12, opts);
    REQUIRE(r1.schedule.segments.size() == r2.schedule.segments.size());
    for (size_t i = 0; i < r1.schedule.segments.size(); ++i) {
        CHECK(r1.schedule.segments[i].generator == r2.schedule.segments[i].generator);
        CHECK(r1.schedule.segments[i].duration == r2.schedule.segments[i].duration);
        CHECK(r1.schedule.segments[i].amplitude == r2.schedule.segments[i].amplitude);
    }
    CHECK(r1.report.max_error == r2.report.max_error);
}

TEST_CASE("state transfer") {
    ModelSpace sp = build_space(ModelKind::JC, 1, 5);
    GeneratorSet g = jc_generators(sp);
    const int n = sp.total_dim();

    Vector psi0 = Vector::Zero(n);
    psi0[sp.index_of(0, 0)] = 1.0;

    SUBCASE("identical states need no schedule") {
        ctrl::SynthesisOptions opts;
        auto res = ctrl::reach_state(psi0, psi0, g, sp, 3, 1e-3, 10, opts);
        CHECK(res.success);
        CHECK(res.schedule.segments.empty());
        CHECK(res.overlap == doctest::Approx(1.0));
    }

    SUBCASE("one-excitation transfer succeeds") {
        Vector psi1 = Vector::Zero(n);
        psi1[sp.index_of(1, 0)] = 1.0;
        ctrl::SynthesisOptions opts;
        opts.seed = 7;
        opts.restarts = 3;
        auto res = ctrl::reach_state(psi0, psi1, g, sp, 3, 1e-2, 100, opts);
        CHECK(res.success);
        CHECK(res.infidelity < 1e-4);
    }

    SUBCASE("cross-sector transfer is blocked under symmetric generators") {
        GeneratorSet sym;
        sym.symmetric = {{"H_JC,1", *g.find_symmetric("H_JC,1")},
                         {"H_JC,2", *g.find_symmetric("H_JC,2")}};
        sym.includes_identity = false;
        Vector a = Vector::Zero(n), b = Vector::Zero(n);
        a[sp.index_of(1, 0)] = 1.0;
        b[sp.index_of(2, 0)] = 1.0;
        ctrl::SynthesisOptions opts;
        opts.seed = 5;
        opts.restarts = 2;
        opts.max_passes = 8;
        auto res = ctrl::reach_state(a, b, sym, sp, 3, 1e-3, 40, opts);
        CHECK(!res.success);
        CHECK(res.overlap < 1e-12);  // exactly blocked, no gain over zero
    }
}

}  // TEST_SUITE
