#include <doctest.h>

#include <cmath>
#include "gemcap/error.hpp"
#include "gemcap/tensor.hpp"

using namespace gemcap;

TEST_CASE("create fills") {
    Tensor z = Tensor::zeros({2, 2});
    for (double v : z.values())
        CHECK(v == 0.0);

    Tensor c = Tensor::constant({3}, 1.5);
    CHECK(c.shape() == std::vector<int>{3});
    for (double v : c.values())
        CHECK(v == 1.5);

    Rng r1(7), r2(7);
    Tensor a = Tensor::normal({2}, 0.0, 1.0, r1);
    Tensor b = Tensor::normal({2}, 0.0, 1.0, r2);
    CHECK(a == b);
}

TEST_CASE("create rejects bad shapes") {
    CHECK_THROWS_AS(Tensor::zeros({0}), InvalidShape);
    CHECK_THROWS_AS(Tensor::zeros({2, -1}), InvalidShape);
    CHECK_THROWS_AS(Tensor::zeros({}), InvalidShape);
}

TEST_CASE("matmul identity and known product") {
    Tensor eye = Tensor::from_data({2, 2}, {1, 0, 0, 1});
    Tensor x = Tensor::from_data({2, 2}, {3, 1, 4, 1});
    CHECK(matmul(eye, x) == x);

    Tensor a = Tensor::from_data({2, 2}, {1, 2, 3, 4});
    Tensor b = Tensor::from_data({2, 2}, {5, 6, 7, 8});
    Tensor c = matmul(a, b);
    CHECK(c.at(0, 0) == 19);
    CHECK(c.at(0, 1) == 22);
    CHECK(c.at(1, 0) == 43);
    CHECK(c.at(1, 1) == 50);

    Tensor zero = Tensor::zeros({2, 2});
    CHECK(matmul(zero, x) == zero);
}

TEST_CASE("matmul rejects mismatched inner dims") {
    Tensor a = Tensor::zeros({2, 3});
    Tensor b = Tensor::zeros({2, 2});
    CHECK_THROWS_AS(matmul(a, b), ShapeMismatch);
}

TEST_CASE("matmul associativity and distributivity on random chains") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Tensor a = Tensor::normal({3, 4}, 0.0, 1.0, rng);
        Tensor b = Tensor::normal({4, 5}, 0.0, 1.0, rng);
        Tensor c = Tensor::normal({5, 2}, 0.0, 1.0, rng);

        Tensor left = matmul(matmul(a, b), c);
        Tensor right = matmul(a, matmul(b, c));
        for (std::size_t i = 0; i < left.size(); ++i) {
            const double scale = std::max({std::abs(left[i]), std::abs(right[i]), 1.0});
            CHECK(std::abs(left[i] - right[i]) / scale < 1e-9);
        }

        Tensor b2 = Tensor::normal({4, 5}, 0.0, 1.0, rng);
        Tensor dist1 = matmul(a, ew(EwOp::Add, b, b2));
        Tensor dist2 = ew(EwOp::Add, matmul(a, b), matmul(a, b2));
        for (std::size_t i = 0; i < dist1.size(); ++i) {
            const double scale = std::max({std::abs(dist1[i]), std::abs(dist2[i]), 1.0});
            CHECK(std::abs(dist1[i] - dist2[i]) / scale < 1e-9);
        }
    }
}

TEST_CASE("elementwise ops") {
    Tensor a = Tensor::from_values({1, 2});
    Tensor b = Tensor::from_values({3, 4});
    Tensor sum = ew(EwOp::Add, a, b);
    CHECK(sum[0] == 4);
    CHECK(sum[1] == 6);
    CHECK(ew(EwOp::Add, a, b) == ew(EwOp::Add, b, a));

    Tensor x = Tensor::from_values({-2.5, 7.0, 0.0});
    CHECK(ew(EwOp::Mul, x, 1.0) == x);

    Tensor m = ew(EwOp::Max, Tensor::from_values({-1, 2}), 0.0);
    CHECK(m[0] == 0);
    CHECK(m[1] == 2);

    CHECK_THROWS_AS(ew(EwOp::Add, a, Tensor::zeros({3})), ShapeMismatch);
}

TEST_CASE("reductions") {
    Tensor m = Tensor::from_data({2, 2}, {1, 2, 3, 4});
    Tensor s = reduce(ReduceOp::Sum, m, 0);
    CHECK(s.shape() == std::vector<int>{2});
    CHECK(s[0] == 4);
    CHECK(s[1] == 6);

    Tensor c = Tensor::constant({3, 5}, 2.5);
    Tensor mean = reduce(ReduceOp::Mean, c, 1);
    for (double v : mean.values())
        CHECK(v == 2.5);

    Tensor am = reduce(ReduceOp::Argmax, Tensor::from_values({0.2, 0.9, 0.9}), 0);
    CHECK(am[0] == 1.0);

    CHECK_THROWS_AS(reduce(ReduceOp::Sum, m, 2), InvalidAxis);
}

TEST_CASE("argmax picks the first maximal index on random duplicates") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> vals(8);
        for (double& v : vals)
            v = std::floor(rng.uniform(0.0, 3.0)); // few distinct values, ties likely
        Tensor t = Tensor::from_data({8}, vals);
        const int got = static_cast<int>(reduce(ReduceOp::Argmax, t, 0)[0]);
        int expect = 0;
        for (int i = 1; i < 8; ++i)
            if (vals[static_cast<std::size_t>(i)] > vals[static_cast<std::size_t>(expect)])
                expect = i;
        CHECK(got == expect);
    }
}

TEST_CASE("transpose") {
    Tensor a = Tensor::from_data({2, 3}, {1, 2, 3, 4, 5, 6});
    Tensor t = transpose(a);
    CHECK(t.shape() == std::vector<int>{3, 2});
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(2, 1) == 6);
    CHECK(transpose(t) == a);
}
