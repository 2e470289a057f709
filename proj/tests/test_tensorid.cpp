#include <catch2/catch_amalgamated.hpp>

#include "curvstab/tensorid.hpp"
#include "oracles.hpp"

#include <random>

using namespace curvstab;
using namespace curvstab::tensorid;

namespace {

CubicSymTensor random_cubic(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> raw(static_cast<std::size_t>(n) * n * n);
    for (auto& v : raw) v = dist(rng);
    return CubicSymTensor::from_raw(n, raw);
}

DiagonalShape random_shape(int n, std::mt19937_64& rng) {
    return DiagonalShape(n, oracles::random_vector(n, rng));
}

}  // namespace

TEST_CASE("cubic tensor symmetrization") {
    std::vector<double> raw(27, 0.0);
    raw[0 * 9 + 1 * 3 + 2] = 6.0;  // only C_123 set; symmetrized value is 1 everywhere
    const auto C = CubicSymTensor::from_raw(3, raw);
    CHECK(C(0, 1, 2) == 1.0);
    CHECK(C(2, 1, 0) == 1.0);
    CHECK(C(1, 2, 0) == 1.0);
}

TEST_CASE("ssy_left pinned cases") {
    SECTION("zero tensor gives zero") {
        const CubicSymTensor C(3);
        CHECK(ssy_left(DiagonalShape::of({1, 2, 3}), C) == 0.0);
    }
    SECTION("fully aligned gradient: h=(1,0,0), only C_111 = a") {
        CubicSymTensor C(3);
        C.set_sym(0, 0, 0, 0.4);
        CHECK(ssy_left(DiagonalShape::of({1, 0, 0}), C) == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("|A| = 0 raises a division error") {
        CHECK_THROWS_AS(ssy_left(DiagonalShape::of({0, 0, 0}), CubicSymTensor(3)),
                        division_by_zero);
        CHECK_THROWS_AS(ssy_right(DiagonalShape::of({0, 0, 0}), CubicSymTensor(3)),
                        division_by_zero);
    }
}

TEST_CASE("ssy_right pinned case: h=(1,0,0), C_221 = b") {
    // By hand: pair sum contributes b^2 + b^2 over (i,s) = (1,2),(2,1) at k=1,
    // halved and divided by |A|^2 = 1 gives b^2; the off-diagonal sum has
    // C_221 under two (i,j) orderings giving 2 b^2; total 3 b^2.
    const double b = 0.8;
    CubicSymTensor C(3);
    C.set_sym(1, 1, 0, b);
    const auto h = DiagonalShape::of({1, 0, 0});
    const double expect = 3.0 * b * b;
    CHECK(ssy_right(h, C) == Catch::Approx(expect));
    CHECK(ssy_right(h, C) > 0.0);
    CHECK(ssy_left(h, C) == Catch::Approx(expect));
}

TEST_CASE("SSY decomposition: left equals right and right is nonnegative") {
    std::mt19937_64 rng(987654);
    for (int n = 2; n <= 5; ++n) {
        int used = 0;
        while (used < 1000) {
            const auto h = random_shape(n, rng);
            if (std::sqrt(h.norm_sq()) < 0.1) continue;
            ++used;
            const auto C = random_cubic(n, rng);
            const double left = ssy_left(h, C);
            const double right = ssy_right(h, C);
            REQUIRE(std::abs(left - right) <= 1e-10 * (1.0 + std::abs(right)));
            REQUIRE(right >= -1e-12);
        }
    }
}

TEST_CASE("equality_conditions") {
    SECTION("cylinder data h=(kappa,0,0), C_111 = kappa'") {
        CubicSymTensor C(3);
        C.set_sym(0, 0, 0, 0.3);
        const auto rep = equality_conditions(DiagonalShape::of({0.5, 0, 0}), C, 1e-8);
        CHECK(rep.offdiag_vanish);
        CHECK(rep.distinct_vanish);
        CHECK(rep.proportional);
        CHECK(rep.at_most_one_diag);
    }
    SECTION("zero tensor trivially satisfies everything") {
        const auto rep =
            equality_conditions(DiagonalShape::of({1, 2, 3}), CubicSymTensor(3), 1e-8);
        CHECK(rep.all());
    }
    SECTION("two nonzero diagonal derivatives break proportionality") {
        CubicSymTensor C(3);
        C.set_sym(0, 0, 0, 1.0);
        C.set_sym(1, 1, 1, 1.0);
        const auto rep = equality_conditions(DiagonalShape::of({1, 2, 0}), C, 1e-8);
        CHECK_FALSE(rep.proportional);  // h_11 C_221 = 0 != h_22 C_111 = 2
        CHECK_FALSE(rep.at_most_one_diag);
    }
    SECTION("equality family forces cylinder-like rank on constructed data") {
        // For h with one surviving entry and C supported on C_111, the
        // equality system holds and classify_rank must report cylinder_like.
        for (double kappa : {0.2, 1.0, 5.0}) {
            CubicSymTensor C(4);
            C.set_sym(0, 0, 0, 0.7);
            Eigen::VectorXd h = Eigen::VectorXd::Zero(4);
            h[0] = kappa;
            const DiagonalShape shape(4, h);
            REQUIRE(equality_conditions(shape, C, 1e-10).all());
            CHECK(classify_rank(shape, 1e-10) == RankClass::cylinder_like);
        }
    }
}

TEST_CASE("classify_rank") {
    CHECK(classify_rank(DiagonalShape::of({0.5, 0, 0}), 1e-8) == RankClass::cylinder_like);
    CHECK(classify_rank(DiagonalShape::of({1, 1, 1}), 1e-8) == RankClass::generic);
    CHECK(classify_rank(DiagonalShape::of({0, 0, 0}), 1e-8) == RankClass::flat);
    CHECK(classify_rank(DiagonalShape::of({1e-9, 0, 0}), 1e-8) == RankClass::flat);
}

TEST_CASE("p1_contraction") {
    SECTION("pinned: diag(2,2,-1) with S_2 = 0 gives -3 S_3 = 12") {
        CHECK(p1_contraction(curvalg::ShapeOperator::diag({2, 2, -1})) == Catch::Approx(12.0));
    }
    SECTION("pinned: rank one gives 0") {
        CHECK(p1_contraction(curvalg::ShapeOperator::diag({0.9, 0, 0})) ==
              Catch::Approx(0.0).margin(1e-14));
    }
    SECTION("pinned: diag(1,1,1) gives S_1 S_2 - 3 S_3 = 6") {
        CHECK(p1_contraction(curvalg::ShapeOperator::diag({1, 1, 1})) == Catch::Approx(6.0));
    }
    SECTION("equals S_1 S_2 - 3 S_3 for random symmetric A") {
        std::mt19937_64 rng(777);
        for (int n = 2; n <= 6; ++n) {
            for (int trial = 0; trial < 300; ++trial) {
                const curvalg::ShapeOperator A(n, oracles::random_symmetric(n, rng, 2.0));
                const auto cv = curvalg::elem_sym(A);
                const double s3 = (n >= 3) ? cv.S[3] : 0.0;
                const double expect = cv.S[1] * cv.S[2] - 3.0 * s3;
                REQUIRE(std::abs(p1_contraction(A) - expect) <= 1e-10 * (1.0 + std::abs(expect)));
            }
        }
    }
}
