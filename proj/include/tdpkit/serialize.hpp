#pragma once

// JSON forms of fields, scalars, matrices and every report the CLI emits.
// Objects are key-sorted, so dump() output is byte-stable.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdpkit/corpus.hpp"

namespace tdp::io {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

Json field_json(const Field& f);
/// {"kind": "rational"} | {"kind": "prime", "p": n} |
/// {"kind": "quadratic_ext", "base": {...}, "delta": "scalar"}. Parse errors
/// name the offending key.
Field field_from_json(const Json& j);
/// "rational", "Q", "gf:p" or "GF(p)".
Field field_from_flag(const std::string& text);

Json scalars_json(const std::vector<FieldElement>& xs);
Json matrix_json(const ExactMatrix& m);

Json validation_json(const ValidationReport& r);
Json parameters_json(const ParameterArray& p);
Json conditions_json(const ConditionReport& r);
Json qracah_json(const QRacahParameters& p);
Json generated_json(const GeneratedSequences& g);
Json fit_json(const FitResult& r);
Json mu_json(const MuWitnessReport& r);
Json system_json(const TriDiagonalSystem& s);

Json instance_json(const CorpusInstance& inst);
/// One entry per instance, sorted by key: {key, file, valid, sharp, qracah_fit_ok}.
Json manifest_json(const std::vector<CorpusInstance>& instances, std::uint64_t seed);

/// {"tool", "version", "command", "seed"} to which a command adds its results.
Json envelope(const std::string& command, std::uint64_t seed);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

}  // namespace tdp::io
