#include <cmath>

#include "doctest.h"
#include "ncc/numkit.hpp"
#include "oracles.hpp"

using namespace ncc;

TEST_SUITE("numkit") {
  TEST_CASE("lp on the unit square") {
    Mat a(0, 2);
    Vec b;
    a.append_row(Vec{1, 0});
    b.push_back(1);
    a.append_row(Vec{-1, 0});
    b.push_back(0);
    a.append_row(Vec{0, 1});
    b.push_back(1);
    a.append_row(Vec{0, -1});
    b.push_back(0);
    const LpOutcome out = lp_solve({{1, 0}, a, b, Sense::maximize});
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(*out.value == doctest::Approx(1.0));
    const LpOutcome low = lp_solve({{1, 1}, a, b, Sense::minimize});
    REQUIRE(low.status == LpStatus::optimal);
    CHECK(*low.value == doctest::Approx(0.0));
  }

  TEST_CASE("lp contradictory bounds are infeasible") {
    Mat a(0, 1);
    a.append_row(Vec{1});
    a.append_row(Vec{-1});
    const LpOutcome out = lp_solve({{1}, a, {1, -2}, Sense::maximize});
    CHECK(out.status == LpStatus::infeasible);
    CHECK_FALSE(out.point.has_value());
  }

  TEST_CASE("lp detects unbounded objectives") {
    Mat a(0, 2);
    a.append_row(Vec{-1, 0});
    a.append_row(Vec{0, 1});
    const LpOutcome out = lp_solve({{1, 0}, a, {0, 1}, Sense::maximize});
    CHECK(out.status == LpStatus::unbounded);
  }

  TEST_CASE("lp agrees with vertex enumeration on random 3-d polytopes") {
    RngStream rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      Mat a(0, 3);
      Vec b;
      for (int i = 0; i < 8; ++i) {
        a.append_row(rng.gaussian_dir(3));
        b.push_back(rng.uniform(0.1, 1.0));
      }
      const Vec c{1, 1, 0};
      const auto ref = oracle::vertex_max(a, b, c);
      const LpOutcome out = lp_solve({c, a, b, Sense::maximize});
      if (out.status == LpStatus::unbounded) continue;
      REQUIRE(out.status == LpStatus::optimal);
      REQUIRE(ref.has_value());
      CHECK(std::abs(*out.value - *ref) <= 1e-7);
    }
  }

  TEST_CASE("degenerate lp with many redundant tight rows") {
    // Pyramid apex at (0,0,1) touched by many facets.
    Mat a(0, 3);
    Vec b;
    for (int k = 0; k < 24; ++k) {
      const double t = 2 * M_PI * k / 24;
      a.append_row(Vec{std::cos(t), std::sin(t), 1});
      b.push_back(1);
    }
    a.append_row(Vec{0, 0, -1});
    b.push_back(0);
    const LpOutcome out = lp_solve({{0, 0, 1}, a, b, Sense::maximize});
    REQUIRE(out.status == LpStatus::optimal);
    CHECK(*out.value == doctest::Approx(1.0));
  }

  TEST_CASE("eigen of a diagonal matrix") {
    Mat s(3, 3);
    s(0, 0) = 3;
    s(1, 1) = 1;
    s(2, 2) = 2;
    const SymEigen e = sym_eigen(s);
    CHECK(e.values[0] == doctest::Approx(1));
    CHECK(e.values[1] == doctest::Approx(2));
    CHECK(e.values[2] == doctest::Approx(3));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1));
    CHECK(std::abs(e.vectors(2, 1)) == doctest::Approx(1));
    CHECK(std::abs(e.vectors(0, 2)) == doctest::Approx(1));
  }

  TEST_CASE("eigen of the identity") {
    const SymEigen e = sym_eigen(Mat::identity(4));
    for (double v : e.values) CHECK(v == doctest::Approx(1));
  }

  TEST_CASE("eigen reconstruction of random symmetric matrices") {
    RngStream rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      Mat s(5, 5);
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j <= i; ++j) s(i, j) = s(j, i) = rng.gaussian();
      const SymEigen e = sym_eigen(s);
      for (std::size_t i = 1; i < 5; ++i) CHECK(e.values[i - 1] <= e.values[i]);
      double err = 0;
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
          double r = 0;
          for (std::size_t k = 0; k < 5; ++k) r += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
          err = std::max(err, std::abs(r - s(i, j)));
        }
      CHECK(err <= 1e-7);
      const Mat qtq = e.vectors.transpose() * e.vectors;
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(qtq(i, j) - (i == j)) <= 1e-9);
    }
  }

  TEST_CASE("gram-schmidt in the plane") {
    const auto q = orthonormalize({{1, 0}, {1, 1}});
    REQUIRE(q.size() == 2);
    CHECK(q[0][0] == doctest::Approx(1));
    CHECK(q[0][1] == doctest::Approx(0));
    CHECK(q[1][0] == doctest::Approx(0));
    CHECK(std::abs(q[1][1]) == doctest::Approx(1));
  }

  TEST_CASE("gram-schmidt drops dependent vectors") {
    const auto q = orthonormalize({{1, 0}, {2, 0}});
    REQUIRE(q.size() == 1);
    CHECK(q[0][0] == doctest::Approx(1));
  }

  TEST_CASE("six random vectors in R^4 give a basis") {
    RngStream rng(3);
    std::vector<Vec> vs;
    for (int i = 0; i < 6; ++i) vs.push_back(rng.gaussian_dir(4));
    const auto q = orthonormalize(vs);
    REQUIRE(q.size() == 4);
    // Gram matrix of the output must be the identity, so its determinant is 1.
    std::vector<Vec> gram(4, Vec(4));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) gram[i][j] = dot(q[i], q[j]);
    double det = 1;
    auto g = gram;
    for (std::size_t c = 0; c < 4; ++c) {
      det *= g[c][c];
      for (std::size_t r = c + 1; r < 4; ++r) {
        const double f = g[r][c] / g[c][c];
        for (std::size_t k = c; k < 4; ++k) g[r][k] -= f * g[c][k];
      }
    }
    CHECK(det == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("solve_linear against a hand system") {
    Mat a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 3;
    const auto x = solve_linear(a, {3, 5});
    REQUIRE(x);
    CHECK((*x)[0] == doctest::Approx(0.8));
    CHECK((*x)[1] == doctest::Approx(1.4));
    Mat sing(2, 2, 1.0);
    CHECK_FALSE(solve_linear(sing, {1, 1}).has_value());
  }

  TEST_CASE("rng determinism and splitting") {
    RngStream a(42), b(42);
    CHECK(a.next_unit() == b.next_unit());
    RngStream c(42);
    CHECK(rng_uniform(c, 0, 1) == RngStream(42).uniform(0, 1));
    const RngStream p(7);
    RngStream s1 = p.split(1), s2 = p.split(2), s1b = p.split(1);
    const double x1 = s1.next_unit(), x2 = s2.next_unit();
    CHECK(x1 == s1b.next_unit());
    CHECK(x1 != x2);
  }

  TEST_CASE("gaussian directions are unit vectors") {
    RngStream r(9);
    for (int i = 0; i < 100; ++i) CHECK(std::abs(norm2(rng_gaussian_dir(r, 3)) - 1) <= 1e-12);
  }

  TEST_CASE("uniform draws have mean near one half") {
    RngStream r(1);
    double s = 0;
    for (int i = 0; i < 10000; ++i) {
      const double u = r.uniform(0, 1);
      REQUIRE(u >= 0);
      REQUIRE(u < 1);
      s += u;
    }
    CHECK(s / 10000 >= 0.48);
    CHECK(s / 10000 <= 0.52);
  }
}
