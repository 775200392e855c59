#pragma once

#include <string>

#include "json.hpp"
#include "scottlab/borelcode.hpp"
#include "scottlab/structures.hpp"
#include "scottlab/trees.hpp"

namespace scottlab {

using Json = nlohmann::json;

// All parsers throw ParseError with the offending field or value named.
Json parseJsonText(const std::string& text, const std::string& what);
Json readJsonFile(const std::string& path);
// Compact, keys sorted, trailing newline.
std::string dumpJson(const Json& j);

// {"nodes":[{"id":int,"parent":int|null},...]}; ids must be exactly 0..n-1.
Json treeToJson(const Tree& t);
Tree treeFromJson(const Json& j);

// {"map":{"<srcId>":dstId,...}}
Json embeddingToJson(const TreeEmbedding& e);

Json pointSetToJson(const PointSet& s, const PointSpace& space);
PointSet pointSetFromJson(const Json& j, const PointSpace& space);

// {"tree":<tree>,"space":[...],"labels":{"<leafId>":[...],...}}
Json codeToJson(const BorelCode& c);
BorelCode codeFromJson(const Json& j);

// {"op":"base","set":[...]} | {"op":"union"|"intersect","args":[...]}.
// Input may also use {"op":"complement","arg":...}; complements are pushed
// to the base sets by De Morgan while parsing.
Json exprToJson(const SetExpr& e, const PointSpace& space);
SetExpr exprFromJson(const Json& j, const PointSpace& space);
// Sorted labels mentioned anywhere in an expression document.
PointSpace inferSpace(const Json& expr);

Json structureToJson(const FiniteStructure& s);
FiniteStructure structureFromJson(const Json& j);
FiniteStructure parseStructure(const std::string& text);
std::string serializeStructure(const FiniteStructure& s);

}  // namespace scottlab
