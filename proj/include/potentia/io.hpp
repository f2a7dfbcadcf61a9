#pragma once

#include "potentia/control.hpp"
#include "potentia/kripke.hpp"
#include "potentia/potentialist.hpp"
#include "potentia/synthesis.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace potentia {

/// Malformed input file or record.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// {signature: {relations: [{name, arity}]}, worlds: [{id, domain, relations: {name: [[...]]}}],
///  access: "substructure" | [[from, to], ...]}. Access pairs use world indices.
Json system_to_json(const PotentialistSystem& s);
/// Throws FormatError, or PotentialistError if the worlds do not form a system.
PotentialistSystem system_from_json(const Json& j);

/// {worlds: n, access: [[from, to], ...], valuation: {"world": [vars]}}.
Json model_to_json(const KripkeModel& m);
KripkeModel model_from_json(const Json& j);
Json countermodel_to_json(const Countermodel& m);

/// {kind, formulas: [text], system, base, companion?: {kind, formulas}}.
Json certificate_to_json(const ControlCertificate& c);
/// Formulas are parsed against the system's signature; `base` may be a world
/// index or a world name. The result is unverified.
ControlCertificate certificate_from_json(const Json& j, const PotentialistSystem& s);

/// World by name or decimal index; throws FormatError.
std::size_t resolve_world(const PotentialistSystem& s, const std::string& id);

}  // namespace potentia
