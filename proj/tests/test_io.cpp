#include <set>
#include <string>

#include "doctest.h"
#include "scottlab/errors.hpp"
#include "scottlab/io.hpp"
#include "scottlab/random.hpp"

using namespace scottlab;

namespace {

// Evaluates an expression document over label sets, complement included.
std::set<std::string> evalDocument(const Json& j, const std::set<std::string>& universe) {
  const std::string op = j.at("op");
  if (op == "base") return j.at("set").get<std::set<std::string>>();
  if (op == "complement") {
    const auto inner = evalDocument(j.contains("arg") ? j.at("arg") : j.at("args").at(0), universe);
    std::set<std::string> out;
    for (const auto& x : universe) {
      if (!inner.count(x)) out.insert(x);
    }
    return out;
  }
  std::set<std::string> acc = op == "union" ? std::set<std::string>{} : universe;
  for (const Json& a : j.at("args")) {
    const auto s = evalDocument(a, universe);
    std::set<std::string> next;
    for (const auto& x : universe) {
      const bool in = op == "union" ? (acc.count(x) || s.count(x)) : (acc.count(x) && s.count(x));
      if (in) next.insert(x);
    }
    acc = next;
  }
  return acc;
}

Json randomDocument(Rng& rng, const std::vector<std::string>& labels, int depth) {
  if (depth == 0 || rng.chance(0.3)) {
    Json set = Json::array();
    for (const auto& l : labels) {
      if (rng.chance(0.4)) set.push_back(l);
    }
    return {{"op", "base"}, {"set", set}};
  }
  const auto kind = rng.below(3);
  if (kind == 0) {
    Json inner = randomDocument(rng, labels, depth - 1);
    if (rng.chance(0.5)) return {{"op", "complement"}, {"arg", inner}};
    return {{"op", "complement"}, {"args", Json::array({inner})}};
  }
  Json args = Json::array();
  const std::size_t n = 1 + rng.below(3);
  for (std::size_t i = 0; i < n; ++i) args.push_back(randomDocument(rng, labels, depth - 1));
  return {{"op", kind == 1 ? "union" : "intersect"}, {"args", args}};
}

}  // namespace

TEST_CASE("tree json") {
  const Tree t = canonical(3);
  CHECK(treeFromJson(treeToJson(t)) == t);
  CHECK(dumpJson(treeToJson(canonical(1))) ==
        R"({"nodes":[{"id":0,"parent":null},{"id":1,"parent":0}]})"
        "\n");
  // Nodes may come in any order.
  const Json shuffled = Json::parse(R"({"nodes":[{"id":1,"parent":0},{"id":0,"parent":null}]})");
  CHECK(treeFromJson(shuffled) == canonical(1));
  CHECK_THROWS_AS(treeFromJson(Json::parse(R"({"nodes":[{"id":0,"parent":null},{"id":5,"parent":0}]})")),
                  ParseError);
  CHECK_THROWS_AS(treeFromJson(Json::parse(R"({"nodes":[{"id":0,"parent":null},{"id":0,"parent":null}]})")),
                  ParseError);
  CHECK_THROWS_AS(treeFromJson(Json::parse(R"({"nodes":[{"id":0}]})")), ParseError);
  CHECK_THROWS_AS(treeFromJson(Json::parse(R"({"nodes":[{"id":-1,"parent":null}]})")), ParseError);
  CHECK_THROWS_AS(treeFromJson(Json::parse(R"({"nodes":[{"id":0,"parent":1},{"id":1,"parent":0}]})")),
                  StructuralError);
}

TEST_CASE("code json round trip") {
  Rng rng(61);
  for (int i = 0; i < 40; ++i) {
    const BorelCode c = randomCode(rng, 12, 1 + rng.below(6));
    const BorelCode back = codeFromJson(codeToJson(c));
    CHECK(back.tree == c.tree);
    CHECK(back.space == c.space);
    CHECK(back.labels == c.labels);
    CHECK(dumpJson(codeToJson(back)) == dumpJson(codeToJson(c)));
  }
  const Json bad = Json::parse(
      R"({"tree":{"nodes":[{"id":0,"parent":null}]},"space":["a"],"labels":{"0":["b"]}})");
  CHECK_THROWS_AS(codeFromJson(bad), ParseError);
  const Json dupSpace = Json::parse(
      R"({"tree":{"nodes":[{"id":0,"parent":null}]},"space":["a","a"],"labels":{"0":[]}})");
  CHECK_THROWS_AS(codeFromJson(dupSpace), ParseError);
}

TEST_CASE("expression documents with complements") {
  Rng rng(62);
  const std::vector<std::string> labels{"a", "b", "c", "d"};
  const std::set<std::string> universe(labels.begin(), labels.end());
  const PointSpace space(labels);
  for (int i = 0; i < 300; ++i) {
    const Json doc = randomDocument(rng, labels, 4);
    const SetExpr e = exprFromJson(doc, space);
    const auto expected = evalDocument(doc, universe);
    const Json got = pointSetToJson(evalExpr(e), space);
    CHECK(got.get<std::set<std::string>>() == expected);
    // Output never carries complements and parses back to the same expression.
    CHECK(dumpJson(exprToJson(e, space)).find("complement") == std::string::npos);
    CHECK(exprFromJson(exprToJson(e, space), space) == e);
  }
  CHECK_THROWS_AS(exprFromJson(Json::parse(R"({"op":"xor","args":[]})"), space), ParseError);
  CHECK_THROWS_AS(exprFromJson(Json::parse(R"({"op":"union","args":[]})"), space), ParseError);
  CHECK_THROWS_AS(exprFromJson(Json::parse(R"({"op":"complement","args":[]})"), space), ParseError);
  CHECK_THROWS_AS(exprFromJson(Json::parse(R"({"op":"base","set":["z"]})"), space), ParseError);
}

TEST_CASE("inferSpace") {
  const Json doc = Json::parse(
      R"({"op":"union","args":[{"op":"base","set":["y","x"]},{"op":"complement","arg":{"op":"base","set":["w"]}}]})");
  CHECK(inferSpace(doc).labels() == std::vector<std::string>{"w", "x", "y"});
  CHECK_THROWS_AS(inferSpace(Json::parse(R"({"op":"base","set":[]})")), ParseError);
}

TEST_CASE("json text helpers") {
  CHECK_THROWS_AS(parseJsonText("[1,", "input"), ParseError);
  CHECK_THROWS_AS(readJsonFile("/nonexistent/file.json"), ParseError);
  CHECK(dumpJson(Json::parse(R"({"b":1,"a":[2]})")) == "{\"a\":[2],\"b\":1}\n");
}
