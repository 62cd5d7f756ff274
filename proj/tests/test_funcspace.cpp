#include <doctest.h>

#include <limits>

#include "hyperlab/funcspace.hpp"

using namespace hyperlab;

namespace {

LatticeFunction two_entry(const GroupModel& model) {
    LatticeFunction f(model);
    f.set(GroupPoint::scalar(0), 3.0);
    f.set(GroupPoint::scalar(1), -4.0);
    return f;
}

}  // namespace

TEST_CASE("norm exponent domain") {
    CHECK_THROWS_AS(NormParam(0.5), std::invalid_argument);
    CHECK_THROWS_AS(NormParam(0.0), std::invalid_argument);
    CHECK_THROWS_AS(NormParam(std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK(NormParam(1.0).p == 1.0);
    CHECK(NormParam(3.5).p == 3.5);
}

TEST_CASE("entries store values, exact zeros vanish") {
    const auto z = GroupModel::integer_lattice(1);
    LatticeFunction f(z);
    CHECK(f.is_zero());
    f.set(GroupPoint::scalar(2), 1.5);
    CHECK(f.at(GroupPoint::scalar(2)) == 1.5);
    CHECK(f.at(GroupPoint::scalar(3)) == 0.0);
    f.set(GroupPoint::scalar(2), 0.0);
    CHECK(f.is_zero());
    CHECK(f.support().empty());

    CHECK_THROWS_AS(f.set(GroupPoint::scalar(0), std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(f.set(GroupPoint{{0, 0}}, 1.0), std::invalid_argument);

    const auto cyc = GroupModel::finite_cyclic(5);
    LatticeFunction g(cyc);
    CHECK_THROWS_AS(g.set(GroupPoint::scalar(7), 1.0), std::invalid_argument);
}

TEST_CASE("restriction, scaling, and translation") {
    const auto z = GroupModel::integer_lattice(1);
    const auto f = two_entry(z);

    const auto fE = f.restricted(CompactRegion::interval(0, 0));
    CHECK(fE.support_size() == 1);
    CHECK(fE.at(GroupPoint::scalar(0)) == 3.0);

    const auto h = f.scaled(-2.0);
    CHECK(h.at(GroupPoint::scalar(1)) == 8.0);
    CHECK(f.scaled(0.0).is_zero());

    // g(x + s*a) = f(x): a delta at 0 moves to s*a.
    LatticeFunction delta(z);
    delta.set(GroupPoint::scalar(0), 1.0);
    const auto moved = delta.translated(GroupPoint::scalar(1), 3);
    CHECK(moved.support_size() == 1);
    CHECK(moved.at(GroupPoint::scalar(3)) == 1.0);
}

TEST_CASE("arithmetic needs matching models") {
    const auto z = GroupModel::integer_lattice(1);
    const auto line = GroupModel::discretized_line(0.5);
    const auto f = two_entry(z);
    LatticeFunction g(line);
    g.set(GroupPoint::scalar(0), 1.0);
    CHECK_THROWS_AS(f + g, std::invalid_argument);
    CHECK_THROWS_AS(f - g, std::invalid_argument);

    const auto sum = f + f.scaled(-1.0);
    CHECK(sum.is_zero());
}

TEST_CASE("norms against hand values") {
    const auto z = GroupModel::integer_lattice(1);
    const auto f = two_entry(z);

    CHECK(lp_norm(f, NormParam(1.0)) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(lp_norm(f, NormParam(2.0)) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(lp_norm_pow(f, NormParam(2.0)) == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(lp_norm(f, NormParam(3.5)) == doctest::Approx(4.372215289689355).epsilon(1e-13));
    CHECK(sup_norm(f) == 4.0);

    // Cell volume scales the measure, not the values.
    const auto line = GroupModel::discretized_line(0.5);
    LatticeFunction g(line);
    g.set(GroupPoint::scalar(0), 3.0);
    g.set(GroupPoint::scalar(1), -4.0);
    CHECK(lp_norm_pow(g, NormParam(2.0)) == doctest::Approx(12.5).epsilon(1e-14));

    LatticeFunction h(z);
    h.set(GroupPoint::scalar(0), 3.0);
    CHECK(lp_distance(two_entry(z), h, NormParam(2.0)) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(lp_norm(LatticeFunction(z), NormParam(2.0)) == 0.0);
}

TEST_CASE("indicator covers exactly the region") {
    const auto z = GroupModel::integer_lattice(1);
    const auto chi = indicator(z, CompactRegion::interval(-2, 2));
    CHECK(chi.support_size() == 5);
    CHECK(chi.at(GroupPoint::scalar(-2)) == 1.0);
    CHECK(chi.at(GroupPoint::scalar(3)) == 0.0);
    CHECK(lp_norm_pow(chi, NormParam(2.0)) == 5.0);
}
