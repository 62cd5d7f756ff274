#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperlab/translation_ops.hpp"

using namespace hyperlab;

namespace {

const GroupModel kZ = GroupModel::integer_lattice(1);
const GroupPoint kA = GroupPoint::scalar(1);
const WeightSpec kSalas = WeightSpec::step(2.0, 0.5, {1}, 0);

LatticeFunction delta(const GroupModel& model, std::int64_t x, double v = 1.0) {
    LatticeFunction f(model);
    f.set(GroupPoint::scalar(x), v);
    return f;
}

LatticeFunction random_sparse(const GroupModel& model, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> coord(-30, 30);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_int_distribution<int> count(1, 10);
    LatticeFunction f(model);
    const int k = count(rng);
    for (int i = 0; i < k; ++i) f.set(GroupPoint::scalar(coord(rng)), value(rng));
    if (f.is_zero()) f.set(GroupPoint::scalar(0), 0.5);
    return f;
}

}  // namespace

TEST_CASE("single application moves mass one step and weights it") {
    const auto image = apply_translation(kA, kSalas, delta(kZ, 0));
    CHECK(image.support_size() == 1);
    CHECK(image.at(GroupPoint::scalar(1)) == doctest::Approx(0.5).epsilon(1e-14));

    const auto image3 = apply_translation_power(kA, kSalas, 3, delta(kZ, 0));
    CHECK(image3.at(GroupPoint::scalar(3)) == doctest::Approx(0.125).epsilon(1e-13));

    const auto pre = apply_inverse_power(kA, kSalas, 3, delta(kZ, 3));
    CHECK(pre.at(GroupPoint::scalar(0)) == doctest::Approx(8.0).epsilon(1e-13));

    CHECK(apply_translation_power(kA, kSalas, 0, delta(kZ, 5)) == delta(kZ, 5));
    CHECK_THROWS_AS(apply_translation_power(kA, kSalas, -1, delta(kZ, 0)),
                    std::invalid_argument);
}

TEST_CASE("operator speed must be positive") {
    CHECK_THROWS_AS(validate_operator(kZ, OperatorSpec{kA, kSalas, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_operator(kZ, OperatorSpec{GroupPoint{{1, 0}}, kSalas, 1}),
                    std::invalid_argument);
}

TEST_CASE("inverse powers undo translation powers to rounding") {
    std::mt19937_64 rng(7);
    const std::vector<WeightSpec> weights = {
        kSalas, WeightSpec::constant(1.3), WeightSpec::power_law(0.7, {1}),
        WeightSpec::table({{GroupPoint::scalar(0), 3.0}, {GroupPoint::scalar(4), 0.2}}, 1.1)};

    for (const auto& w : weights) {
        for (int rep = 0; rep < 5; ++rep) {
            const auto h = random_sparse(kZ, rng);
            for (const std::int64_t n : {1, 7, 33}) {
                const auto round_trip =
                    apply_translation_power(kA, w, n, apply_inverse_power(kA, w, n, h));
                const auto back =
                    apply_inverse_power(kA, w, n, apply_translation_power(kA, w, n, h));
                for (const auto& [x, v] : h.entries()) {
                    CHECK(round_trip.at(x) == doctest::Approx(v).epsilon(1e-13));
                    CHECK(back.at(x) == doctest::Approx(v).epsilon(1e-13));
                }
                CHECK(round_trip.support_size() == h.support_size());
                CHECK(back.support_size() == h.support_size());
            }
        }
    }
}

TEST_CASE("multi-dimensional steps move along the step vector") {
    const auto z2 = GroupModel::integer_lattice(2);
    const auto a = z2.make_point({1, -1});
    const auto w = WeightSpec::step(2.0, 0.5, {1, 0}, 0);
    LatticeFunction f(z2);
    f.set(z2.make_point({0, 0}), 1.0);
    const auto image = apply_translation_power(a, w, 2, f);
    CHECK(image.support_size() == 1);
    // Factors at (1,-1) and (2,-2): both have positive first coordinate.
    CHECK(image.at(z2.make_point({2, -2})) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("cyclic translation wraps around") {
    const auto cyc = GroupModel::finite_cyclic(5);
    const auto a = GroupPoint::scalar(2);
    const auto w = WeightSpec::constant(2.0);
    LatticeFunction f(cyc);
    f.set(GroupPoint::scalar(4), 1.0);
    const auto image = apply_translation_power(a, w, 2, f);
    // 4 + 2*2 = 8 = 3 mod 5, factor 2^2.
    CHECK(image.at(GroupPoint::scalar(3)) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("norm through products equals norm of the materialized image") {
    std::mt19937_64 rng(99);
    const auto E = CompactRegion::interval(-20, 20);
    const std::vector<WeightSpec> weights = {kSalas, WeightSpec::power_law(-0.4, {1}),
                                             WeightSpec::constant(0.8)};
    const std::vector<double> ps = {1.0, 2.0, 3.5};

    for (const auto& w : weights) {
        for (int rep = 0; rep < 4; ++rep) {
            const auto f = random_sparse(kZ, rng);
            for (const double pv : ps) {
                const NormParam p(pv);
                for (const std::int64_t n : {1, 6, 20}) {
                    const double fwd = norm_via_products(kA, w, n, f, E, p, ProductSide::Forward);
                    const double fwd_direct =
                        lp_norm(apply_translation_power(kA, w, n, f.restricted(E)), p);
                    CHECK(fwd == doctest::Approx(fwd_direct).epsilon(1e-11));

                    const double inv = norm_via_products(kA, w, n, f, E, p, ProductSide::Inverse);
                    const double inv_direct =
                        lp_norm(apply_inverse_power(kA, w, n, f.restricted(E)), p);
                    CHECK(inv == doctest::Approx(inv_direct).epsilon(1e-11));
                }
            }
        }
    }
}

TEST_CASE("composition norm matches a hand-applied composition") {
    const auto wT = WeightSpec::step(4.0, 0.25, {1}, 0);
    const auto wS = kSalas;
    LatticeFunction g(kZ);
    g.set(GroupPoint::scalar(0), 1.0);
    g.set(GroupPoint::scalar(2), -0.5);

    // T^3 S^2 g lands on {1, 3} with values {1, -0.03125}.
    const double pow2 = compose_norm_pow(kA, wT, 3, wS, 2, g, NormParam(2.0));
    CHECK(pow2 == doctest::Approx(1.0009765625).epsilon(1e-12));

    // Cross-check against materialized operators for several shapes.
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 4; ++rep) {
        const auto h = random_sparse(kZ, rng);
        for (const auto& [nT, nS] : std::vector<std::pair<std::int64_t, std::int64_t>>{
                 {0, 0}, {5, 0}, {0, 5}, {7, 3}, {3, 7}}) {
            const double via = compose_norm_pow(kA, wT, nT, wS, nS, h, NormParam(2.0));
            const auto image =
                apply_translation_power(kA, wT, nT, apply_inverse_power(kA, wS, nS, h));
            CHECK(via == doctest::Approx(lp_norm_pow(image, NormParam(2.0))).epsilon(1e-11));
        }
    }
}

TEST_CASE("distance to a power image without materializing it") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 5; ++rep) {
        const auto u = random_sparse(kZ, rng);
        const auto target = random_sparse(kZ, rng);
        for (const std::int64_t n : {0, 1, 9}) {
            const double via = power_distance_pow(kA, kSalas, n, u, target, NormParam(2.0));
            const double direct = lp_norm_pow(
                apply_translation_power(kA, kSalas, n, u) - target, NormParam(2.0));
            CHECK(via == doctest::Approx(direct).epsilon(1e-11));
        }
    }

    // The distance from an image to itself is exactly zero.
    const auto u = delta(kZ, 2, 0.7);
    const auto image = apply_translation_power(kA, kSalas, 6, u);
    CHECK(power_distance_pow(kA, kSalas, 6, u, image, NormParam(2.0)) == 0.0);
}

TEST_CASE("out-of-range images throw from materializers and poison report paths") {
    const auto big = WeightSpec::constant(2.0);
    const auto f = delta(kZ, 0);
    CHECK_THROWS_AS(apply_translation_power(kA, big, 1100, f), std::overflow_error);
    CHECK_THROWS_AS(apply_inverse_power(kA, WeightSpec::constant(0.5), 1100, f),
                    std::overflow_error);

    const double nv = norm_via_products(kA, big, 1100, f, CompactRegion::interval(-1, 1),
                                        NormParam(2.0), ProductSide::Forward);
    CHECK(std::isinf(nv));
    CHECK(std::isinf(compose_norm_pow(kA, big, 1100, big, 0, f, NormParam(2.0))));
    CHECK(std::isinf(power_distance_pow(kA, big, 1100, f, f, NormParam(2.0))));

    // Far below range the image underflows to zero rather than throwing.
    const auto tiny = apply_translation_power(kA, WeightSpec::constant(0.5), 1100, f);
    CHECK(tiny.is_zero());
}
