#include "scottlab/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "scottlab/errors.hpp"

namespace scottlab {

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(what + ": missing field \"" + key + "\"");
  return *it;
}

std::size_t natural(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(what + ": expected a non-negative integer, got " + j.dump());
  }
  return j.get<std::size_t>();
}

std::size_t naturalKey(const std::string& key, const std::string& what) {
  if (key.empty() || !std::all_of(key.begin(), key.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    throw ParseError(what + ": key \"" + key + "\" is not a node id");
  }
  return std::stoul(key);
}

const std::string& text(const Json& j, const std::string& what) {
  if (!j.is_string()) throw ParseError(what + ": expected a string, got " + j.dump());
  return j.get_ref<const std::string&>();
}

const Json& array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  return j;
}

}  // namespace

Json parseJsonText(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": malformed JSON (" + e.what() + ")");
  }
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parseJsonText(buf.str(), path);
}

std::string dumpJson(const Json& j) { return j.dump() + "\n"; }

Json treeToJson(const Tree& t) {
  Json nodes = Json::array();
  for (NodeId p = 0; p < t.size(); ++p) {
    auto parent = t.parent(p);
    nodes.push_back({{"id", p}, {"parent", parent ? Json(*parent) : Json(nullptr)}});
  }
  return {{"nodes", nodes}};
}

Tree treeFromJson(const Json& j) {
  const Json& nodes = array(field(j, "nodes", "tree"), "tree.nodes");
  const std::size_t n = nodes.size();
  std::vector<std::optional<NodeId>> parents(n);
  std::vector<char> seen(n, 0);
  for (const Json& node : nodes) {
    const std::size_t id = natural(field(node, "id", "tree node"), "tree node id");
    if (id >= n) {
      throw ParseError("tree node id " + std::to_string(id) + " is outside 0.." +
                       std::to_string(n == 0 ? 0 : n - 1) + " (ids must be dense)");
    }
    if (seen[id]) throw ParseError("duplicate tree node id " + std::to_string(id));
    seen[id] = 1;
    const Json& parent = field(node, "parent", "tree node " + std::to_string(id));
    if (!parent.is_null()) {
      parents[id] = static_cast<NodeId>(natural(parent, "parent of node " + std::to_string(id)));
    }
  }
  return Tree::fromParents(parents);
}

Json embeddingToJson(const TreeEmbedding& e) {
  Json map = Json::object();
  for (NodeId p = 0; p < e.map.size(); ++p) map[std::to_string(p)] = e.map[p];
  return {{"map", map}};
}

Json pointSetToJson(const PointSet& s, const PointSpace& space) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i]) labels.push_back(space.label(i));
  }
  std::sort(labels.begin(), labels.end());
  return labels;
}

PointSet pointSetFromJson(const Json& j, const PointSpace& space) {
  PointSet s = space.none();
  for (const Json& item : array(j, "point set")) {
    const std::string& label = text(item, "point");
    auto i = space.indexOf(label);
    if (!i) throw ParseError("unknown point \"" + label + "\"");
    s.set(*i);
  }
  return s;
}

Json codeToJson(const BorelCode& c) {
  Json labels = Json::object();
  for (const auto& [p, set] : c.labels) labels[std::to_string(p)] = pointSetToJson(set, c.space);
  return {{"tree", treeToJson(c.tree)}, {"space", c.space.labels()}, {"labels", labels}};
}

namespace {

PointSpace spaceFromJson(const Json& j) {
  std::vector<std::string> labels;
  for (const Json& item : array(j, "space")) labels.push_back(text(item, "space"));
  try {
    return PointSpace(std::move(labels));
  } catch (const StructuralError& e) {
    throw ParseError(std::string("space: ") + e.what());
  }
}

}  // namespace

BorelCode codeFromJson(const Json& j) {
  BorelCode c{treeFromJson(field(j, "tree", "code")), spaceFromJson(field(j, "space", "code")), {}};
  const Json& labels = field(j, "labels", "code");
  if (!labels.is_object()) throw ParseError("code.labels: expected an object");
  for (const auto& [key, value] : labels.items()) {
    const std::size_t p = naturalKey(key, "code.labels");
    c.labels.emplace(static_cast<NodeId>(p), pointSetFromJson(value, c.space));
  }
  validateCode(c);
  return c;
}

Json exprToJson(const SetExpr& e, const PointSpace& space) {
  if (e.op == SetExpr::Op::Base) return {{"op", "base"}, {"set", pointSetToJson(e.set, space)}};
  Json args = Json::array();
  for (const auto& a : e.args) args.push_back(exprToJson(a, space));
  return {{"op", e.op == SetExpr::Op::Union ? "union" : "intersect"}, {"args", args}};
}

namespace {

SetExpr exprFromJsonImpl(const Json& j, const PointSpace& space, bool negated) {
  const std::string& op = text(field(j, "op", "expr"), "expr.op");
  if (op == "base") {
    PointSet s = pointSetFromJson(field(j, "set", "base expr"), space);
    return SetExpr::base(negated ? ~s : s);
  }
  if (op == "complement") {
    if (j.contains("arg")) return exprFromJsonImpl(j["arg"], space, !negated);
    const Json& args = array(field(j, "args", "complement expr"), "complement args");
    if (args.size() != 1) throw ParseError("complement takes exactly one argument");
    return exprFromJsonImpl(args[0], space, !negated);
  }
  if (op != "union" && op != "intersect") throw ParseError("unknown expr op \"" + op + "\"");
  std::vector<SetExpr> args;
  for (const Json& a : array(field(j, "args", op + " expr"), op + " args")) {
    args.push_back(exprFromJsonImpl(a, space, negated));
  }
  if (args.empty()) throw ParseError(op + " with no arguments");
  const bool isUnion = (op == "union") != negated;
  return isUnion ? SetExpr::unite(std::move(args)) : SetExpr::intersect(std::move(args));
}

void collectLabels(const Json& j, std::set<std::string>& out) {
  if (!j.is_object()) return;
  if (auto it = j.find("set"); it != j.end() && it->is_array()) {
    for (const Json& item : *it) out.insert(text(item, "point"));
  }
  if (auto it = j.find("args"); it != j.end() && it->is_array()) {
    for (const Json& a : *it) collectLabels(a, out);
  }
  if (auto it = j.find("arg"); it != j.end()) collectLabels(*it, out);
}

}  // namespace

SetExpr exprFromJson(const Json& j, const PointSpace& space) {
  return exprFromJsonImpl(j, space, false);
}

PointSpace inferSpace(const Json& expr) {
  std::set<std::string> labels;
  collectLabels(expr, labels);
  if (labels.empty()) throw ParseError("expression mentions no points; give a space");
  return PointSpace(std::vector<std::string>(labels.begin(), labels.end()));
}

Json structureToJson(const FiniteStructure& s) {
  Json sig = Json::array();
  Json rels = Json::object();
  for (std::size_t r = 0; r < s.signature().size(); ++r) {
    const auto& rel = s.signature()[r];
    sig.push_back({{"name", rel.name}, {"arity", rel.arity}});
    Json tuples = Json::array();
    for (const Tuple& t : s.tuples(r)) tuples.push_back(t);  // std::set keeps them sorted
    rels[rel.name] = tuples;
  }
  return {{"signature", sig}, {"universe", s.universe()}, {"relations", rels}};
}

FiniteStructure structureFromJson(const Json& j) {
  std::vector<Relation> rels;
  for (const Json& r : array(field(j, "signature", "structure"), "structure.signature")) {
    rels.push_back({text(field(r, "name", "relation"), "relation name"),
                    natural(field(r, "arity", "relation"), "relation arity")});
  }
  const std::size_t n = natural(field(j, "universe", "structure"), "structure.universe");
  try {
    Signature sig(std::move(rels));
    std::vector<std::set<Tuple>> tuples(sig.size());
    if (auto it = j.find("relations"); it != j.end()) {
      if (!it->is_object()) throw ParseError("structure.relations: expected an object");
      for (const auto& [name, list] : it->items()) {
        auto r = sig.indexOf(name);
        if (!r) throw ParseError("relations: \"" + name + "\" is not in the signature");
        for (const Json& t : array(list, "relation " + name)) {
          Tuple tuple;
          for (const Json& x : array(t, "relation " + name + " tuple")) {
            tuple.push_back(static_cast<Elem>(natural(x, "relation " + name + " element")));
          }
          tuples[*r].insert(std::move(tuple));
        }
      }
    }
    return FiniteStructure(std::move(sig), n, std::move(tuples));
  } catch (const StructuralError& e) {
    throw ParseError(e.what());
  }
}

FiniteStructure parseStructure(const std::string& text) {
  return structureFromJson(parseJsonText(text, "structure"));
}

std::string serializeStructure(const FiniteStructure& s) { return dumpJson(structureToJson(s)); }

}  // namespace scottlab
