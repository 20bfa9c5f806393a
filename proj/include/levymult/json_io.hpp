#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "levymult/corpus.hpp"
#include "levymult/grid_function.hpp"
#include "levymult/levy_measure.hpp"
#include "levymult/modulator.hpp"
#include "levymult/stochastic.hpp"
#include "levymult/symbol.hpp"

namespace levymult {

using Json = nlohmann::json;

/// A JSON number, or a string holding a decimal ("0.1", "-2.5e-3"), a
/// rational ("1/3"), or "inf" / "-inf". Throws InvalidInput otherwise.
double number_from_json(const Json& j, const std::string& where = "value");
/// Finite values as JSON numbers (shortest round-trip form), infinities as strings.
Json number_to_json(double v);

/// A real number, or {"re": ..., "im": ...}.
Complex complex_from_json(const Json& j, const std::string& where = "value");
Json complex_to_json(Complex c);

LevyMeasure measure_from_json(const Json& j);
Json measure_to_json(const LevyMeasure& measure);

JumpModulator modulator_from_json(const Json& j);
Json modulator_to_json(const JumpModulator& modulator);

/// A measure document may carry its modulator under "modulator".
struct MeasureDocument {
  LevyMeasure measure;
  std::optional<JumpModulator> modulator;
};
MeasureDocument measure_document_from_json(const Json& j);

MultiplierSymbol symbol_from_json(const Json& j);
Json symbol_to_json(const MultiplierSymbol& symbol);

/// Inline {"dimension", "sizes", "lengths", "values"} or {"file": path};
/// relative paths are resolved against base_dir.
GridFunction grid_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json grid_to_json(const GridFunction& f);

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json scenario_to_json(const Scenario& scenario);

CorpusConfig corpus_config_from_json(const Json& j);
Json corpus_config_to_json(const CorpusConfig& config);

/// Parses a JSON file; throws InvalidInput with the parser's diagnostic.
Json read_json_file(const std::filesystem::path& path);

}  // namespace levymult
