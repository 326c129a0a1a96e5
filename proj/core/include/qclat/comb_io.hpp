#pragma once

#include <string>

#include <json.hpp>

#include "qclat/comb.hpp"

namespace qclat {

using json = nlohmann::ordered_json;

/// Comb file schema:
/// {"dim": p, "disc": d, "components": [{"basis": [[fe..]..] (columns),
///  "offset": [fe..], "terms": [{"coeff": fe, "phase": fe, "freq": [fe..]}]}]}
/// with fe = {"rat": "p/q", "irr": "p/q"} and disc file-global.
json comb_to_json(const Comb& m);

/// Throws ParseError naming the JSON pointer of the offending field.
/// Non-canonical input is canonicalized on load.
Comb comb_from_json(const json& j);

Comb read_comb_file(const std::string& path);
void write_comb_file(const std::string& path, const Comb& m);

/// write-then-parse is the identity on canonical combs; this reports whether
/// the given document already was the canonical serialization
bool json_is_canonical(const json& j);

json field_to_json(const FieldElem& e);
FieldElem field_from_json(const json& j, long disc, const std::string& where);

} // namespace qclat
