#include <doctest.h>

#include <random>

#include "dctopo/expr_parse.hpp"

using namespace dctopo;

TEST_CASE("reference expressions parse to (1024, 4)") {
  for (const char* text : {"L(Pow(DBJMod(2,4),2))", "Pow(Prod(UniRing(1,4),UniRing(1,8)),2)",
                           "L(L(L(DBJMod(4,2))))", "L(L(Pow(Diamond,2)))"}) {
    auto e = parse_expr(text);
    CHECK(derived_shape(*e) == std::pair<long, int>{1024, 4});
  }
  CHECK(derived_shape(*parse_expr("GenKautz(4,1024)")) == std::pair<long, int>{1024, 4});
}

TEST_CASE("leaves and whitespace") {
  auto d = parse_expr("Diamond");
  CHECK(d->kind == TopoExpr::Kind::Base);
  CHECK(d->base.family == BaseFamily::Diamond);
  auto e = parse_expr("  L ( Pow( DBJMod( 2 , 4 ) , 2 ) )  ");
  CHECK(print_expr(*e) == "L(Pow(DBJMod(2,4),2))");
}

TEST_CASE("errors carry positions") {
  CHECK_THROWS_AS(parse_expr("L("), ParseError);
  CHECK_THROWS_AS(parse_expr("Deg(Diamond)"), ParseError);
  CHECK_THROWS_AS(parse_expr("Frob(3)"), ParseError);
  CHECK_THROWS_AS(parse_expr("UniRing(0,4)"), ParseError);   // parameter bounds
  CHECK_THROWS_AS(parse_expr("BiRing(3,5)"), ParseError);    // odd degree
  CHECK_THROWS_AS(parse_expr("Diamond(3)"), ParseError);     // arity
  CHECK_THROWS_AS(parse_expr("Diamond extra"), ParseError);  // trailing input
  try {
    parse_expr("Prod(Diamond Diamond)");
    CHECK(false);
  } catch (const ParseError& pe) {
    CHECK(pe.position > 0);
  }
}

namespace {

TopoExprPtr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth <= 1 ? 0 : 5);
  switch (kind(rng)) {
    default:
    case 0: {
      std::uniform_int_distribution<int> fam(0, 7);
      std::uniform_int_distribution<long> small(2, 5);
      switch (fam(rng)) {
        case 0: return TopoExpr::make_base({BaseFamily::Complete, {small(rng)}});
        case 1: return TopoExpr::make_base({BaseFamily::CompleteBipartite, {small(rng)}});
        case 2: return TopoExpr::make_base({BaseFamily::UniRing, {1, small(rng) + 1}});
        case 3: return TopoExpr::make_base({BaseFamily::BiRing, {2, small(rng) + 1}});
        case 4: return TopoExpr::make_base({BaseFamily::DeBruijn, {2, small(rng) % 3 + 1}});
        case 5: return TopoExpr::make_base({BaseFamily::GenKautz, {2, small(rng) + 4}});
        case 6: return TopoExpr::make_base({BaseFamily::Diamond, {}});
        default: return TopoExpr::make_base({BaseFamily::CycleMesh, {small(rng), small(rng)}});
      }
    }
    case 1: return TopoExpr::line(random_expr(rng, depth - 1));
    case 2: {
      std::uniform_int_distribution<int> n(1, 3);
      return TopoExpr::deg(random_expr(rng, depth - 1), n(rng));
    }
    case 3: {
      std::uniform_int_distribution<int> n(1, 3);
      return TopoExpr::pow(random_expr(rng, depth - 1), n(rng));
    }
    case 4: return TopoExpr::prod(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return TopoExpr::undir(random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("1000 fuzzed round trips") {
  std::mt19937 rng(20240817);
  for (int i = 0; i < 1000; ++i) {
    auto e = random_expr(rng, 4);
    std::string printed = print_expr(*e);
    auto back = parse_expr(printed);
    CHECK(print_expr(*back) == printed);
  }
}
