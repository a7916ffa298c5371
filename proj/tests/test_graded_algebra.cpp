#include <catch2/catch_amalgamated.hpp>

#include "limulrich/graded_algebra.hpp"
#include "limulrich/koszul.hpp"
#include "limulrich/parse.hpp"

using namespace limulrich;

namespace {

std::shared_ptr<GradedAlgebra> make_ring(uint32_t p, int m, const std::string& gens, int window) {
  std::vector<Polynomial> polys;
  if (!gens.empty()) {
    size_t start = 0;
    while (start < gens.size()) {
      size_t semi = gens.find(';', start);
      if (semi == std::string::npos) semi = gens.size();
      polys.push_back(parse_polynomial(gens.substr(start, semi - start), m, p));
      start = semi + 1;
    }
  }
  return std::make_shared<GradedAlgebra>(p, m, polys, window);
}

}  // namespace

TEST_CASE("polynomial ring Hilbert function is binomial") {
  auto r2 = make_ring(5, 2, "", 10);
  for (int t = 0; t <= 10; ++t) CHECK(static_cast<long long>(r2->dim(t)) == t + 1);
  CHECK(r2->dim(4) == 5);
  auto r4 = make_ring(7, 4, "", 8);
  for (int t = 0; t <= 8; ++t)
    CHECK(static_cast<long long>(r4->dim(t)) == binomial_ll(t + 3, 3));
  CHECK(r2->dim(0) == 1);
}

TEST_CASE("cubic hypersurface Hilbert function") {
  auto r = make_ring(5, 3, "x0^3 + x1^3 + x2^3", 12);
  for (int t = 0; t <= 12; ++t)
    CHECK(static_cast<long long>(r->dim(t)) == binomial_ll(t + 2, 2) - binomial_ll(t - 1, 2));
  CHECK(r->dim(4) == 12);
  CHECK(r->hilbert_poly_degree() == 1);
}

TEST_CASE("quadric cone Hilbert function 2t+1") {
  auto r = make_ring(7, 3, "x0*x2 - x1^2", 12);
  for (int t = 1; t <= 12; ++t) CHECK(static_cast<long long>(r->dim(t)) == 2 * t + 1);
}

TEST_CASE("window errors and input errors") {
  auto r = make_ring(5, 2, "", 6);
  CHECK_THROWS_AS(r->dim(7), window_error);
  CHECK_THROWS_AS(r->var_action(0, 6), window_error);
  CHECK_THROWS_AS(make_ring(5, 2, "", 1), input_error);
}

TEST_CASE("linear_action: unit vector, zero, linearity") {
  auto r = make_ring(5, 2, "", 8);
  FpVec e1 = {1, 0};
  FpMatrix mult_x0 = r->linear_action(e1, 3);
  CHECK(mult_x0.rows() == 5);
  CHECK(mult_x0.cols() == 4);
  CHECK(rank(mult_x0) == 4);  // multiplication by x0 is injective
  FpMatrix zero = r->linear_action({0, 0}, 3);
  CHECK(zero.is_zero());
  SeededRng rng(9, "linaction");
  for (int rep = 0; rep < 4; ++rep) {
    FpVec a = {rng.below(5), rng.below(5)}, b = {rng.below(5), rng.below(5)};
    FpVec ab = {fp_add(a[0], b[0], 5), fp_add(a[1], b[1], 5)};
    CHECK(r->linear_action(ab, 4) == add(r->linear_action(a, 4), r->linear_action(b, 4)));
  }
}

TEST_CASE("variable actions commute across the window") {
  auto r = make_ring(5, 3, "x0^3 + x1^3 + x2^3", 9);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (int t = 0; t + 2 <= 9; ++t)
        CHECK(compose(r->var_action(i, t + 1), r->var_action(j, t)) ==
              compose(r->var_action(j, t + 1), r->var_action(i, t)));
}

TEST_CASE("noether normalization: polynomial ring") {
  auto r = make_ring(5, 2, "", 8);
  LinearFormSet z = noether_normalize(*r, 2, 3);
  CHECK(z.t0 == 1);
  CHECK(z.total_quotient_length() == 1);
}

TEST_CASE("noether normalization: cubic hypersurface has length 3") {
  auto r = make_ring(5, 3, "x0^3 + x1^3 + x2^3", 12);
  LinearFormSet z = noether_normalize(*r, 2, 11);
  CHECK(z.t0 == 3);
  CHECK(z.quotient_dims[0] == 1);
  CHECK(z.quotient_dims[1] == 1);
  CHECK(z.quotient_dims[2] == 1);
  CHECK(z.quotient_dims[3] == 0);
  CHECK(z.total_quotient_length() == 3);  // the degree of the hypersurface
}

TEST_CASE("noether normalization rejects a wrong dimension") {
  auto r = make_ring(5, 3, "x0^3 + x1^3 + x2^3", 12);
  CHECK_THROWS_AS(noether_normalize(*r, 3, 1), normalization_error);
}

TEST_CASE("quotient length equals the Koszul cokernel length") {
  auto r = make_ring(7, 3, "x0*x2 - x1^2", 12);
  LinearFormSet z = noether_normalize(*r, 2, 5);
  SlicedModule m = algebra_module(r, 8);
  std::vector<FormSpec> forms;
  for (const FpVec& f : z.forms) forms.push_back(FormSpec::linear(f));
  KoszulReport rep = koszul_report(m, forms);
  CHECK(rep.coker_length == static_cast<long long>(z.total_quotient_length()));
  CHECK(rep.multiplicity == 2);  // quadric
}

TEST_CASE("reduce_polynomial is a ring morphism on a sample") {
  auto r = make_ring(5, 3, "x0^3 + x1^3 + x2^3", 9);
  // the generator itself reduces to zero
  Polynomial g = parse_polynomial("x0^3 + x1^3 + x2^3", 3, 5);
  FpVec red = r->reduce_polynomial(g);
  for (uint32_t v : red) CHECK(v == 0);
  Polynomial h = parse_polynomial("x0^3 + x1^3 + x2^3 + x0*x1*x2", 3, 5);
  FpVec red2 = r->reduce_polynomial(h);
  FpVec red3 = r->reduce_polynomial(parse_polynomial("x0*x1*x2", 3, 5));
  CHECK(red2 == red3);
}
