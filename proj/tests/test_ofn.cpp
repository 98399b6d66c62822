#include <random>

#include "doctest.h"
#include "fctsim/ofn.hpp"

using namespace fctsim;

namespace {

Ofn random_monotone(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    std::array<double, 5> a{dist(gen), dist(gen), dist(gen), dist(gen),
                            dist(gen)};
    std::sort(a.begin(), a.end());
    return Ofn{a};
}

}  // namespace

TEST_CASE("make_ofn accepts monotone tuples and rejects the rest") {
    const Ofn s = make_ofn(1440, 1503, 1575, 1638, 1800);
    CHECK(s[0] == 1440.0);
    CHECK(s[4] == 1800.0);

    CHECK(make_ofn(0, 0, 0, 0, 0) == ofn_from_scalar(0.0));
    CHECK_THROWS_AS(make_ofn(3, 2, 1, 0, 0), NonMonotoneTuple);
}

TEST_CASE("from_scalar embeds a crisp value") {
    CHECK(ofn_from_scalar(1.0) == make_ofn(1, 1, 1, 1, 1));
    CHECK(ofn_from_scalar(0.0) == make_ofn(0, 0, 0, 0, 0));
    CHECK(ofn_from_scalar(2.0) == make_ofn(2, 2, 2, 2, 2));
}

TEST_CASE("apply_binary works component-wise without re-sorting") {
    const Ofn a = make_ofn(5, 6, 7, 8, 9);
    CHECK(apply_binary(BinaryOp::Sub, a, a) == ofn_from_scalar(0.0));

    CHECK(apply_binary(BinaryOp::Add, make_ofn(1, 2, 3, 4, 5),
                       ofn_from_scalar(1.0)) == make_ofn(2, 3, 4, 5, 6));

    // min may legitimately produce a non-monotone tuple.
    const Ofn crossed = apply_binary(BinaryOp::Min, make_ofn(1, 2, 3, 4, 5),
                                     Ofn{{5, 4, 3, 2, 1}});
    CHECK(crossed == Ofn{{1, 2, 3, 2, 1}});
    CHECK_FALSE(is_monotone(crossed));
}

TEST_CASE("normalize maps the support onto [0, 1]") {
    CHECK(normalize(make_ofn(0, 1, 2, 3, 4)) ==
          NormalizedOfn{{0, 0.25, 0.5, 0.75, 1}});
    CHECK(normalize(make_ofn(100, 104, 108, 112, 120)) ==
          NormalizedOfn{{0, 0.2, 0.4, 0.6, 1}});
    // Zero-width support normalises to all zeros.
    CHECK(normalize(ofn_from_scalar(7.0)) == NormalizedOfn{});
}

TEST_CASE("component locality") {
    std::mt19937_64 gen(7);
    const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul,
                            BinaryOp::Min, BinaryOp::Max};
    for (int trial = 0; trial < 200; ++trial) {
        const Ofn a = random_monotone(gen);
        const Ofn b = random_monotone(gen);
        for (BinaryOp op : ops) {
            const Ofn base = apply_binary(op, a, b);
            for (int m = 0; m < kOfnComponents; ++m) {
                // Perturbing other components must not change component m.
                Ofn pa = a;
                Ofn pb = b;
                for (int j = 0; j < kOfnComponents; ++j) {
                    if (j != m) {
                        pa[j] += 13.5;
                        pb[j] -= 2.25;
                    }
                }
                CHECK(apply_binary(op, pa, pb)[m] == base[m]);
            }
        }
    }
}

TEST_CASE("self-subtraction and additive identity") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Ofn a = random_monotone(gen);
        CHECK(apply_binary(BinaryOp::Sub, a, a) == ofn_from_scalar(0.0));
        CHECK(a + ofn_from_scalar(0.0) == a);
    }
}

TEST_CASE("normalization endpoints and affine invariance") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> scale(0.1, 4.0);
    std::uniform_real_distribution<double> shift(-20.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        Ofn a = random_monotone(gen);
        if (a[4] == a[0]) continue;
        const NormalizedOfn n = normalize(a);
        CHECK(n[0] == 0.0);
        CHECK(n[4] == 1.0);
        for (int m = 0; m < kOfnComponents; ++m) {
            CHECK(n[m] >= 0.0);
            CHECK(n[m] <= 1.0);
        }

        const double c = scale(gen);
        const double d = shift(gen);
        Ofn mapped;
        for (int m = 0; m < kOfnComponents; ++m) mapped[m] = c * a[m] + d;
        const NormalizedOfn again = normalize(mapped);
        for (int m = 0; m < kOfnComponents; ++m) {
            CHECK(again[m] == doctest::Approx(n[m]).epsilon(1e-12));
        }
    }
}
