#include "dctopo/expr_parse.hpp"

#include <cctype>
#include <map>

namespace dctopo {

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) throw ParseError(pos, std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError(pos, "expected a name");
    return s.substr(start, pos - start);
  }

  long integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw ParseError(pos, "expected an integer");
    return std::stol(s.substr(start, pos - start));
  }

  std::vector<long> int_args() {
    std::vector<long> args;
    expect('(');
    args.push_back(integer());
    while (eat(',')) args.push_back(integer());
    expect(')');
    return args;
  }

  TopoExprPtr expr() {
    std::size_t at = pos;
    std::string name = ident();
    if (name == "L") {
      expect('(');
      auto inner = expr();
      expect(')');
      return TopoExpr::line(std::move(inner));
    }
    if (name == "Deg" || name == "Pow") {
      expect('(');
      auto inner = expr();
      expect(',');
      long n = integer();
      expect(')');
      if (n < 1) throw ParseError(at, name + ": parameter must be >= 1");
      return name == "Deg" ? TopoExpr::deg(std::move(inner), static_cast<int>(n))
                           : TopoExpr::pow(std::move(inner), static_cast<int>(n));
    }
    if (name == "Prod") {
      expect('(');
      auto l = expr();
      expect(',');
      auto r = expr();
      expect(')');
      return TopoExpr::prod(std::move(l), std::move(r));
    }
    if (name == "Undir") {
      expect('(');
      auto inner = expr();
      expect(')');
      return TopoExpr::undir(std::move(inner));
    }
    static const std::map<std::string, BaseFamily> kFamilies = {
        {"Complete", BaseFamily::Complete},
        {"CompleteBipartite", BaseFamily::CompleteBipartite},
        {"Circulant", BaseFamily::Circulant},
        {"UniRing", BaseFamily::UniRing},
        {"BiRing", BaseFamily::BiRing},
        {"Torus", BaseFamily::Torus},
        {"Hypercube", BaseFamily::Hypercube},
        {"Hamming", BaseFamily::Hamming},
        {"DeBruijn", BaseFamily::DeBruijn},
        {"DBJMod", BaseFamily::DBJMod},
        {"GenKautz", BaseFamily::GenKautz},
        {"Diamond", BaseFamily::Diamond},
        {"CycleMesh", BaseFamily::CycleMesh},
    };
    auto it = kFamilies.find(name);
    if (it == kFamilies.end()) throw ParseError(at, "unknown constructor '" + name + "'");
    BaseSpec spec{it->second, {}};
    skip_ws();
    if (pos < s.size() && s[pos] == '(') spec.params = int_args();
    try {
      annotations_for(spec);  // arity and parameter validation
    } catch (const std::exception& ex) {
      throw ParseError(at, ex.what());
    }
    return TopoExpr::make_base(std::move(spec));
  }
};

}  // namespace

TopoExprPtr parse_expr(const std::string& text) {
  Parser p{text};
  auto e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError(p.pos, "trailing input");
  return e;
}

}  // namespace dctopo
