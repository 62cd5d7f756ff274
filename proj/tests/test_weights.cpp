#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperlab/weights.hpp"

using namespace hyperlab;

namespace {

const GroupModel kZ = GroupModel::integer_lattice(1);
const GroupPoint kA = GroupPoint::scalar(1);

// Two-sided step: 2 on the nonpositive axis, 1/2 on the positive one.
const WeightSpec kSalas = WeightSpec::step(2.0, 0.5, {1}, 0);

}  // namespace

TEST_CASE("weight factories reject nonpositive values") {
    CHECK_THROWS_AS(WeightSpec::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::constant(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::step(2.0, 0.0, {1}, 0), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::step(2.0, 0.5, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::power_law(std::nan(""), {1}), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::table({{GroupPoint::scalar(0), -1.0}}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::table({}, 0.0), std::invalid_argument);
}

TEST_CASE("pointwise evaluation of the four families") {
    CHECK(WeightSpec::constant(3.0)(GroupPoint::scalar(17)) == 3.0);

    CHECK(kSalas(GroupPoint::scalar(0)) == 2.0);
    CHECK(kSalas(GroupPoint::scalar(-5)) == 2.0);
    CHECK(kSalas(GroupPoint::scalar(1)) == 0.5);

    // Two-dimensional step along the diagonal.
    const auto diag = WeightSpec::step(3.0, 0.25, {1, 1}, 1);
    CHECK(diag(GroupPoint{{0, 1}}) == 3.0);
    CHECK(diag(GroupPoint{{1, 1}}) == 0.25);

    const auto plaw = WeightSpec::power_law(1.0, {1});
    CHECK(plaw(GroupPoint::scalar(0)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(plaw(GroupPoint::scalar(1)) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(plaw(GroupPoint::scalar(-1)) == doctest::Approx(1.5).epsilon(1e-14));

    const auto table = WeightSpec::table(
        {{GroupPoint::scalar(0), 3.0}, {GroupPoint::scalar(1), 0.25}}, 1.5);
    CHECK(table(GroupPoint::scalar(0)) == 3.0);
    CHECK(table(GroupPoint::scalar(1)) == 0.25);
    CHECK(table(GroupPoint::scalar(5)) == 1.5);

    CHECK(WeightSpec::constant(2.0).is_constant());
    CHECK_FALSE(kSalas.is_constant());
    CHECK(kSalas.family_name() == "step");
}

TEST_CASE("upper bounds dominate sampled values") {
    const std::vector<WeightSpec> ws = {WeightSpec::constant(2.5), kSalas,
                                        WeightSpec::power_law(1.5, {1}),
                                        WeightSpec::power_law(-2.0, {1}),
                                        WeightSpec::table({{GroupPoint::scalar(3), 7.0}}, 0.5)};
    for (const auto& w : ws) {
        const double cap = w.upper_bound();
        for (std::int64_t x = -50; x <= 50; ++x)
            CHECK(w(GroupPoint::scalar(x)) <= cap * (1.0 + 1e-12));
    }
}

TEST_CASE("step products against hand values") {
    // Forward: factors at x+1 .. x+n.
    CHECK(forward_product(kZ, kSalas, kA, GroupPoint::scalar(0), 4).value() ==
          doctest::Approx(0.0625).epsilon(1e-13));
    CHECK(forward_product(kZ, kSalas, kA, GroupPoint::scalar(-2), 4).value() ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(forward_product(kZ, kSalas, kA, GroupPoint::scalar(-10), 4).value() ==
          doctest::Approx(16.0).epsilon(1e-13));
    CHECK(forward_product(kZ, kSalas, kA, GroupPoint::scalar(5), 0).log_value == 0.0);

    // Inverse-map side: reciprocal of factors at x, x-1, .., x-n+1.
    CHECK(backward_product_inv(kZ, kSalas, kA, GroupPoint::scalar(0), 3).value() ==
          doctest::Approx(0.125).epsilon(1e-13));
    CHECK(backward_product_inv(kZ, kSalas, kA, GroupPoint::scalar(2), 3).value() ==
          doctest::Approx(2.0).epsilon(1e-13));

    CHECK_THROWS_AS(forward_product(kZ, kSalas, kA, GroupPoint::scalar(0), -1),
                    std::invalid_argument);
}

TEST_CASE("power-law products telescope") {
    const auto plaw = WeightSpec::power_law(1.0, {1});
    // (3/2)(4/3)(5/4) = 5/2.
    CHECK(forward_product(kZ, plaw, kA, GroupPoint::scalar(0), 3).value() ==
          doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("ratio products divide pointwise") {
    const auto w1 = WeightSpec::step(4.0, 0.25, {1}, 0);
    const auto w2 = kSalas;
    CHECK(ratio_product(kZ, w1, w2, kA, GroupPoint::scalar(0), 3).value() ==
          doctest::Approx(8.0).epsilon(1e-13));
    CHECK(ratio_product(kZ, w1, w2, kA, GroupPoint::scalar(2), 3).value() ==
          doctest::Approx(0.5).epsilon(1e-13));
    // Opposite directions cancel exactly in the log domain.
    const auto r12 = ratio_product(kZ, w1, w2, kA, GroupPoint::scalar(4), 17).log_value;
    const auto r21 = ratio_product(kZ, w2, w1, kA, GroupPoint::scalar(4), 17).log_value;
    CHECK(r12 + r21 == 0.0);
}

TEST_CASE("sup over a region picks the worst cell") {
    const auto K = CompactRegion::interval(-10, 10);
    const auto sup1 = sup_product_on(kZ, K, ProductQuery::forward(kSalas), kA, 1);
    CHECK(sup1.value() == doctest::Approx(2.0).epsilon(1e-13));

    // At n = 30 the best cell x = -10 gives 2^10 * 2^-(20) = 2^-10.
    const auto sup30 = sup_product_on(kZ, K, ProductQuery::forward(kSalas), kA, 30);
    CHECK(sup30.value() == doctest::Approx(0.0009765625).epsilon(1e-12));
    const auto supb = sup_product_on(kZ, K, ProductQuery::backward_inv(kSalas), kA, 30);
    CHECK(supb.value() == doctest::Approx(0.0009765625).epsilon(1e-12));

    const auto empty = sup_product_on(kZ, CompactRegion(), ProductQuery::forward(kSalas), kA, 5);
    CHECK(empty.log_value == -std::numeric_limits<double>::infinity());

    CHECK_THROWS_AS(sup_product_on(kZ, K,
                                   ProductQuery{ProductQuery::Kind::Ratio, kSalas, std::nullopt},
                                   kA, 1),
                    std::invalid_argument);
}

TEST_CASE("running tables reproduce the one-shot products") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> val(0.1, 4.0);

    std::map<GroupPoint, double> entries;
    for (std::int64_t x = -40; x <= 40; ++x)
        entries[GroupPoint::scalar(x)] = val(rng);
    const auto table = WeightSpec::table(std::move(entries), 1.25);

    const auto K = CompactRegion::interval(-8, 8);
    RunningProducts run(kZ, table, kA, K.cells());
    CHECK(run.order() == 0);

    for (std::int64_t n = 1; n <= 25; ++n) {
        run.advance();
        for (std::size_t i = 0; i < run.cell_count(); ++i) {
            const auto& x = run.cells()[i];
            // Same factor sequence in the same order: bitwise equal.
            CHECK(run.log_forward(i) == forward_product(kZ, table, kA, x, n).log_value);
            CHECK(run.log_backward_inv(i) ==
                  backward_product_inv(kZ, table, kA, x, n).log_value);
            CHECK(run.log_backward_raw(i) == -run.log_backward_inv(i));
        }
    }
    CHECK(run.order() == 25);
}
