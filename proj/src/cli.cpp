#include "scottlab/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "scottlab/borelcode.hpp"
#include "scottlab/efgame.hpp"
#include "scottlab/errors.hpp"
#include "scottlab/io.hpp"
#include "scottlab/scott.hpp"
#include "scottlab/selftest.hpp"
#include "scottlab/structures.hpp"
#include "scottlab/trees.hpp"

namespace scottlab::cli {

namespace {

struct Outcome {
  Json body;
  int code = kOk;
};

using Handler = std::function<Outcome()>;

Signature parseSignatureSpec(const std::string& spec) {
  std::vector<Relation> rels;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
      throw ParseError("signature entry \"" + item + "\" is not NAME:ARITY");
    }
    const std::string arity = item.substr(colon + 1);
    if (!std::all_of(arity.begin(), arity.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ParseError("signature entry \"" + item + "\" has a non-numeric arity");
    }
    rels.push_back({item.substr(0, colon), std::stoul(arity)});
  }
  if (rels.empty()) throw ParseError("empty signature");
  return Signature(std::move(rels));
}

std::vector<std::filesystem::path> classFiles(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ParseError("class directory " + dir + " not found");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw PreconditionError("class directory " + dir + " has no .json files");
  return files;
}

StructureClass loadClass(const std::string& dir, Caps caps) {
  std::vector<FiniteStructure> members;
  for (const auto& f : classFiles(dir)) members.push_back(structureFromJson(readJsonFile(f.string())));
  return StructureClass(std::move(members), caps);
}

Json reportToJson(const Link2Report& r) {
  return {{"scottHeight", r.scottHeight},
          {"runTreeRank", r.runTreeRank},
          {"rankIdentityHolds", r.rankIdentityHolds},
          {"codeDecidesIso", r.codeDecidesIso},
          {"borelRankUpperBound", r.borelRankUpperBound}};
}

// Expression documents are either a bare expression (space inferred from
// the labels it mentions) or {"space":[...],"expr":...}.
std::pair<SetExpr, PointSpace> loadExpr(const Json& doc) {
  if (doc.is_object() && doc.contains("expr")) {
    std::vector<std::string> labels;
    if (!doc.contains("space") || !doc["space"].is_array()) {
      throw ParseError("expression document: \"space\" must be an array");
    }
    for (const Json& l : doc["space"]) {
      if (!l.is_string()) throw ParseError("expression document: space labels must be strings");
      labels.push_back(l.get<std::string>());
    }
    PointSpace space(std::move(labels));
    return {exprFromJson(doc["expr"], space), space};
  }
  PointSpace space = inferSpace(doc);
  return {exprFromJson(doc, space), space};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-scale trees, Borel codes, EF games and Scott heights"};
  app.require_subcommand(1);
  std::map<const CLI::App*, Handler> handlers;

  std::size_t nodeBudget = kDefaultNodeBudget;
  std::size_t positionBudget = kDefaultPositionBudget;
  auto addNodeBudget = [&](CLI::App* sub) {
    sub->add_option("--node-budget", nodeBudget, "Maximum tree size to materialize")
        ->capture_default_str();
  };

  std::string input;

  {
    auto* sub = app.add_subcommand("tree-rank", "Rank of a tree and its node ranks");
    sub->add_option("--input", input, "Tree JSON file")->required();
    handlers[sub] = [&] {
      const Tree t = treeFromJson(readJsonFile(input));
      return Outcome{{{"rank", rank(t)}, {"nodeRanks", nodeRanks(t)}}};
    };
  }

  std::size_t m = 0;
  {
    auto* sub = app.add_subcommand("tree-canonical", "Canonical tree of decreasing sequences");
    sub->add_option("--m", m, "Order of the canonical tree")->required();
    addNodeBudget(sub);
    handlers[sub] = [&] { return Outcome{treeToJson(canonical(m, nodeBudget))}; };
  }

  std::size_t width = 1;
  {
    auto* sub = app.add_subcommand("tree-embed", "Embed a tree into canonical(width * beta)");
    sub->add_option("--input", input, "Tree JSON file")->required();
    sub->add_option("--width", width, "Branching bound w")->required();
    addNodeBudget(sub);
    handlers[sub] = [&] {
      const Tree t = treeFromJson(readJsonFile(input));
      const TreeEmbedding e = embed(t, Width(width), nodeBudget);
      Json body = embeddingToJson(e);
      body["targetOrder"] = width * (rank(t) - 1);
      body["strong"] = validateEmbedding(e, true).ok;
      return Outcome{body};
    };
  }

  std::size_t beta = 1;
  {
    auto* sub = app.add_subcommand("tree-witness", "Lower-bound witness tree");
    sub->add_option("--width", width, "Branching w")->required();
    sub->add_option("--beta", beta, "Height parameter (>= 1)")->required();
    addNodeBudget(sub);
    handlers[sub] = [&] { return Outcome{treeToJson(witnessTree(Width(width), beta, nodeBudget))}; };
  }

  std::string point;
  {
    auto* sub = app.add_subcommand("code-solve", "Set coded by a Borel code");
    sub->add_option("--input", input, "Code JSON file")->required();
    sub->add_option("--point", point, "Only decide this point");
    handlers[sub] = [&] {
      const BorelCode c = codeFromJson(readJsonFile(input));
      const PointSet s = codedSet(c);
      if (point.empty()) return Outcome{{{"set", pointSetToJson(s, c.space)}}};
      auto i = c.space.indexOf(point);
      if (!i) throw PreconditionError("point \"" + point + "\" is not in the space");
      return Outcome{{{"point", point}, {"member", static_cast<bool>(s[*i])}}};
    };
  }

  std::size_t fanOut = kDefaultFanOut;
  {
    auto* sub = app.add_subcommand("code-from-expr", "Borel code for a set expression");
    sub->add_option("--input", input, "Expression JSON file")->required();
    sub->add_option("--fan-out", fanOut, "Maximum arguments per operator")->capture_default_str();
    handlers[sub] = [&] {
      auto [e, space] = loadExpr(readJsonFile(input));
      validateExpr(e, space.size(), fanOut);
      return Outcome{codeToJson(codeFromExpr(e, space))};
    };
  }

  {
    auto* sub = app.add_subcommand("expr-from-code", "Set expression for a Borel code");
    sub->add_option("--input", input, "Code JSON file")->required();
    handlers[sub] = [&] {
      const BorelCode c = codeFromJson(readJsonFile(input));
      const SetExpr e = exprFromCode(c);
      const HierarchyLevel h = classifyExpr(e);
      return Outcome{{{"expr", exprToJson(e, c.space)},
                      {"space", c.space.labels()},
                      {"level", {{"sigma", h.sigma}, {"pi", h.pi}}}}};
    };
  }

  {
    auto* sub = app.add_subcommand("code-pad", "Recode on canonical(m)");
    sub->add_option("--input", input, "Code JSON file")->required();
    sub->add_option("--m", m, "Order of the canonical tree")->required();
    addNodeBudget(sub);
    handlers[sub] = [&] {
      const BorelCode c = codeFromJson(readJsonFile(input));
      return Outcome{codeToJson(padToCanonical(c, m, std::nullopt, nodeBudget))};
    };
  }

  std::string kind, signature;
  std::size_t n = 1, p = 0, levels = 1, branching = 1, leafSize = 1;
  std::uint64_t seed = 1;
  double density = 0.5;
  {
    auto* sub = app.add_subcommand("struct-gen", "Generate a finite structure");
    sub->add_option("--kind", kind, "pmodel | nested-eq | random")
        ->required()
        ->check(CLI::IsMember({"pmodel", "nested-eq", "random"}));
    sub->add_option("--n", n, "Universe size (pmodel, random)");
    sub->add_option("--p", p, "Size of P (pmodel)");
    sub->add_option("--levels", levels, "Number of equivalence relations (nested-eq)");
    sub->add_option("--branching", branching, "Classes per coarser class (nested-eq)");
    sub->add_option("--leaf-size", leafSize, "Size of the finest classes (nested-eq)");
    sub->add_option("--seed", seed, "Seed (random)");
    sub->add_option("--signature", signature, "NAME:ARITY,... (random)");
    sub->add_option("--density", density, "Tuple probability (random)");
    handlers[sub] = [&] {
      if (kind == "pmodel") return Outcome{structureToJson(pmodel(n, p))};
      if (kind == "nested-eq") return Outcome{structureToJson(nestedEq(levels, branching, leafSize))};
      if (signature.empty()) throw PreconditionError("random structures need --signature");
      return Outcome{structureToJson(randomStructure(seed, parseSignatureSpec(signature), n, density))};
    };
  }

  std::string left, right;
  {
    auto* sub = app.add_subcommand("struct-iso", "Isomorphism test");
    sub->add_option("--left", left, "Structure JSON file")->required();
    sub->add_option("--right", right, "Structure JSON file")->required();
    handlers[sub] = [&] {
      const auto a = structureFromJson(readJsonFile(left));
      const auto b = structureFromJson(readJsonFile(right));
      const auto f = isomorphic(a, b);
      return Outcome{{{"isomorphic", f.has_value()}, {"bijection", f ? Json(*f) : Json(nullptr)}}};
    };
  }

  std::string treeFile;
  std::optional<std::size_t> alpha;
  std::size_t capC = 0, capF = 0;
  bool useOracle = false;
  {
    auto* sub = app.add_subcommand("ef", "Winner of the EF game");
    sub->add_option("--left", left, "Structure JSON file")->required();
    sub->add_option("--right", right, "Structure JSON file")->required();
    auto* treeOpt = sub->add_option("--tree", treeFile, "Game tree JSON file");
    auto* alphaOpt = sub->add_option("--alpha", alpha, "Play on canonical(alpha)");
    treeOpt->excludes(alphaOpt);
    sub->add_option("--cap-c", capC, "New constraint points per round (default: universe)");
    sub->add_option("--cap-f", capF, "New domain points per round (default: universe)");
    sub->add_option("--position-budget", positionBudget)->capture_default_str();
    sub->add_flag("--oracle", useOracle, "Use the exhaustive oracle instead of the solver");
    handlers[sub] = [&] {
      const auto a = structureFromJson(readJsonFile(left));
      const auto b = structureFromJson(readJsonFile(right));
      if (treeFile.empty() && !alpha) throw PreconditionError("give --tree or --alpha");
      EFConfig cfg{alpha ? canonical(*alpha, nodeBudget) : treeFromJson(readJsonFile(treeFile)),
                   capC ? capC : a.universe(), capF ? capF : a.universe()};
      if (useOracle) return Outcome{{{"winner", playerName(efWinnerBrute(a, b, cfg))}}};
      const EFResult r = efWinner(a, b, cfg, positionBudget);
      return Outcome{{{"winner", playerName(r.winner)}, {"positionsExplored", r.positionsExplored}}};
    };
  }

  std::string classDir;
  std::optional<std::size_t> maxHeight, member;
  int jobs = 0;
  auto classOptions = [&](CLI::App* sub) {
    sub->add_option("--class", classDir, "Directory of structure JSON files")->required();
    sub->add_option("--cap-c", capC, "New constraint points per round")->required();
    sub->add_option("--cap-f", capF, "New domain points per round")->required();
    sub->add_option("--max-height", maxHeight, "Largest height tried (default: universe + 2)");
    sub->add_option("--jobs", jobs, "Threads for the pairwise games (default: OpenMP's choice)");
    sub->add_option("--position-budget", positionBudget)->capture_default_str();
  };
  {
    auto* sub = app.add_subcommand("scott", "Scott height of a class");
    classOptions(sub);
    sub->add_option("--member", member, "Index (in file name order) of a single member");
    handlers[sub] = [&] {
      const StructureClass cls = loadClass(classDir, {capC, capF});
      const auto h = scottHeight(cls, member, maxHeight.value_or(defaultMaxHeight(cls)),
                                 {true, positionBudget});
      return Outcome{{{"scottHeight", h ? Json(*h) : Json(nullptr)}}};
    };
  }
  std::size_t runTreeBudget = kDefaultRunTreeBudget;
  {
    auto* sub = app.add_subcommand("link2", "Run-tree code for isomorphism on a class");
    classOptions(sub);
    sub->add_option("--node-budget", runTreeBudget, "Maximum run-tree size")->capture_default_str();
    handlers[sub] = [&] {
      const StructureClass cls = loadClass(classDir, {capC, capF});
      const Link2Outcome r = verifyLink2(cls, maxHeight.value_or(defaultMaxHeight(cls)),
                                         {true, positionBudget}, runTreeBudget);
      return Outcome{reportToJson(r.report)};
    };
  }

  {
    auto* sub = app.add_subcommand("selftest", "Oracle agreement suites at tiny budgets");
    sub->add_option("--seed", seed, "Seed for the random instances")->capture_default_str();
    handlers[sub] = [&] {
      Json suites = Json::object();
      bool ok = true;
      for (const SuiteResult& r : runSelftest(seed)) {
        suites[r.name] = {{"checked", r.checked}, {"mismatches", r.mismatches}};
        ok = ok && r.mismatches == 0;
      }
      return Outcome{{{"ok", ok}, {"suites", suites}}, ok ? kOk : kDomainError};
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (jobs > 0) omp_set_num_threads(jobs);
    for (const auto& [sub, handler] : handlers) {
      if (!sub->parsed()) continue;
      const Outcome o = handler();
      out << dumpJson(o.body);
      if (o.code != kOk) err << "error: self-test found mismatches\n";
      return o.code;
    }
    return kUsageError;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kResourceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

}  // namespace scottlab::cli
