#pragma once

#include <string>

#include <json.hpp>

#include "spectrascope/coding.hpp"
#include "spectrascope/isomorph.hpp"
#include "spectrascope/model.hpp"
#include "spectrascope/spectrum.hpp"

namespace spectrascope {

// Process model documents: {"schema": 1, "type": "iid"|"markov"|"factor"|"mixture", ...}
ModelPtr model_from_json(const nlohmann::json& j, long long cap = kDefaultCap);
nlohmann::json model_to_json(const Model& model);
ModelPtr load_model(const std::string& path, long long cap = kDefaultCap);

// Codes: {"schema": 1, "radius", "input_alphabet", "output_alphabet",
//         "table": {window label string -> symbol label}}
CodePtr code_from_json(const nlohmann::json& j);
nlohmann::json code_to_json(const SlidingBlockCode& code);
CodePtr load_code(const std::string& path);

// Paths serialize as strings over the alphabet labels (concatenated for
// single-character labels, space-separated otherwise).
std::string path_to_string(const SamplePath& path);
std::vector<int> parse_path_string(const std::string& text, const Alphabet& alphabet);

// Spectra
nlohmann::json staircase_to_json(const StaircaseSpectrum& s);
StaircaseSpectrum staircase_from_json(const nlohmann::json& j);
nlohmann::json estimate_to_json(const SpectrumEstimate& e);
SpectrumEstimate estimate_from_json(const nlohmann::json& j);
std::string spectrum_to_csv(const StaircaseSpectrum& s, const std::vector<double>& tau_grid);
std::string spectrum_to_csv(const SpectrumEstimate& e);

nlohmann::json dominance_to_json(const DominanceReport& r);
nlohmann::json finite_bound_to_json(const FiniteBoundReport& r);
nlohmann::json change_of_measure_to_json(const ChangeOfMeasureReport& r);
nlohmann::json certificate_to_json(const IsomorphismCertificate& c);
nlohmann::json obstruction_to_json(const IsomorphismObstruction& o);

/// Serializes with all floats rounded to 9 significant digits, sorted keys,
/// 2-space indent and a trailing newline; byte-stable across reruns.
std::string dump_json(const nlohmann::json& j);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace spectrascope
