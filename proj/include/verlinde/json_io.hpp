#pragma once

#include "verlinde/graph.hpp"
#include "verlinde/tautology.hpp"

#include <json.hpp>

#include <string>

namespace verlinde {

/// {"vertices":[{"genus":g,"legs":[markings...]},...],"edges":[[v,w],...]}
nlohmann::ordered_json graph_to_json(const StableGraph& g);
/// Throws ParseError on malformed input and InvalidInput on unstable graphs.
StableGraph graph_from_json(const nlohmann::json& j);

/// Graph encoding plus "hpsi":[[k0,k1],...] and "lpsi":{"marking":k}
/// (nonzero entries only).
nlohmann::ordered_json decorated_to_json(const DecoratedGraph& d);
DecoratedGraph decorated_from_json(const nlohmann::json& j);

/// {"g","n","truncation","terms":[{"lambda","graph","hpsi","lpsi","coeff"}]}
/// with terms sorted by (degree, canonical encoding).
nlohmann::ordered_json taut_to_json(const TautClass& c);
TautClass taut_from_json(const nlohmann::json& j);

/// One line per term: "<coeff>  lambda^a  <graph rendering>".
std::string taut_to_text(const TautClass& c);

}  // namespace verlinde
