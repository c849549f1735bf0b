#include "spectrascope/io.hpp"

#include <fstream>
#include <sstream>

namespace spectrascope {

using nlohmann::json;

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw SchemaError(msg);
}

AlphabetPtr alphabet_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "alphabet must be a non-empty array of labels");
  std::vector<std::string> labels;
  for (const auto& l : j) {
    require(l.is_string(), "alphabet labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  return std::make_shared<Alphabet>(std::move(labels));
}

json alphabet_to_json(const Alphabet& a) { return json(a.labels()); }

std::vector<double> prob_vector(const json& j, const char* what) {
  require(j.is_array(), std::string(what) + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    require(x.is_number(), std::string(what) + " entries must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

void round_numbers(json& j) {
  if (j.is_number_float())
    j = round9(j.get<double>());
  else if (j.is_object() || j.is_array())
    for (auto& child : j) round_numbers(child);
}

ModelPtr model_from_json_impl(const json& j, long long cap);
CodePtr code_from_json_impl(const json& j);

}  // namespace

ModelPtr model_from_json(const json& j, long long cap) {
  try {
    return model_from_json_impl(j, cap);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model document: ") + e.what());
  }
}

namespace {

ModelPtr model_from_json_impl(const json& j, long long cap) {
  require(j.is_object(), "model document must be a JSON object");
  require(j.value("schema", 0) == 1, "unsupported or missing model schema version");
  std::string type = j.value("type", "");
  if (type == "iid") {
    auto alphabet = alphabet_from_json(j.at("alphabet"));
    return std::make_shared<IidModel>(alphabet, prob_vector(j.at("probs"), "probs"));
  }
  if (type == "markov") {
    auto alphabet = alphabet_from_json(j.at("alphabet"));
    int order = j.at("order").get<int>();
    require(j.at("kernel").is_array(), "kernel must be an array of rows");
    std::vector<double> kernel;
    for (const auto& row : j.at("kernel"))
      for (double p : prob_vector(row, "kernel row")) kernel.push_back(p);
    if (j.contains("initial"))
      return std::make_shared<MarkovModel>(alphabet, order, std::move(kernel),
                                           prob_vector(j.at("initial"), "initial"));
    return std::make_shared<MarkovModel>(alphabet, order, std::move(kernel));
  }
  if (type == "factor") {
    ModelPtr base = model_from_json(j.at("base"), cap);
    CodePtr code = code_from_json(j.at("code"));
    return std::make_shared<FactorModel>(std::move(base), std::move(code), cap);
  }
  if (type == "mixture") {
    require(j.at("components").is_array(), "components must be an array");
    std::vector<ModelPtr> components;
    for (const auto& c : j.at("components")) components.push_back(model_from_json(c, cap));
    return std::make_shared<MixtureModel>(std::move(components),
                                          prob_vector(j.at("weights"), "weights"));
  }
  throw SchemaError("unknown model type: '" + type + "'");
}

}  // namespace

json model_to_json(const Model& model) {
  json j;
  j["schema"] = 1;
  switch (model.kind()) {
    case ModelKind::Iid: {
      const auto& m = static_cast<const IidModel&>(model);
      j["type"] = "iid";
      j["alphabet"] = alphabet_to_json(m.alphabet());
      j["probs"] = m.probs();
      break;
    }
    case ModelKind::Markov: {
      const auto& m = static_cast<const MarkovModel&>(model);
      j["type"] = "markov";
      j["alphabet"] = alphabet_to_json(m.alphabet());
      j["order"] = m.order();
      int a = m.alphabet().size();
      json rows = json::array();
      for (size_t b = 0; b < m.kernel().size() / a; ++b) {
        json row = json::array();
        for (int s = 0; s < a; ++s) row.push_back(m.kernel()[b * a + s]);
        rows.push_back(row);
      }
      j["kernel"] = rows;
      j["initial"] = m.initial();
      break;
    }
    case ModelKind::Factor: {
      const auto& m = static_cast<const FactorModel&>(model);
      j["type"] = "factor";
      j["base"] = model_to_json(m.base());
      j["code"] = code_to_json(m.code());
      break;
    }
    case ModelKind::Mixture: {
      const auto& m = static_cast<const MixtureModel&>(model);
      j["type"] = "mixture";
      json comps = json::array();
      for (size_t i = 0; i < m.num_components(); ++i)
        comps.push_back(model_to_json(m.component(i)));
      j["components"] = comps;
      j["weights"] = m.weights();
      break;
    }
  }
  return j;
}

ModelPtr load_model(const std::string& path, long long cap) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw SchemaError("failed to parse " + path + ": " + e.what());
  }
  return model_from_json(j, cap);
}

CodePtr code_from_json(const json& j) {
  try {
    return code_from_json_impl(j);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed code document: ") + e.what());
  }
}

namespace {

CodePtr code_from_json_impl(const json& j) {
  require(j.is_object(), "code document must be a JSON object");
  require(j.value("schema", 0) == 1, "unsupported or missing code schema version");
  auto input = alphabet_from_json(j.at("input_alphabet"));
  auto output = alphabet_from_json(j.at("output_alphabet"));
  int radius = j.at("radius").get<int>();
  require(radius >= 0, "radius must be >= 0");
  long long windows = ipow(input->size(), 2 * radius + 1);
  std::vector<int> table(windows, -1);
  require(j.at("table").is_object(), "table must be a window -> symbol object");
  for (const auto& [window_label, symbol] : j.at("table").items()) {
    std::vector<int> window = parse_path_string(window_label, *input);
    require(static_cast<int>(window.size()) == 2 * radius + 1,
            "table window '" + window_label + "' has the wrong length");
    require(symbol.is_string(), "table values must be symbol labels");
    table[word_to_index(window, input->size())] = output->index(symbol.get<std::string>());
  }
  for (long long w = 0; w < windows; ++w)
    require(table[w] >= 0, "table does not cover all windows");
  return std::make_shared<SlidingBlockCode>(input, output, radius, std::move(table));
}

}  // namespace

json code_to_json(const SlidingBlockCode& code) {
  json j;
  j["schema"] = 1;
  j["radius"] = code.radius();
  j["input_alphabet"] = alphabet_to_json(code.input());
  j["output_alphabet"] = alphabet_to_json(code.output());
  json table = json::object();
  std::vector<int> window;
  for (long long w = 0; w < code.num_windows(); ++w) {
    index_to_word(w, code.window_length(), code.input().size(), window);
    SamplePath p;
    p.alphabet = code.input_ptr();
    p.symbols = window;
    table[path_to_string(p)] = code.output().label(code.map_window_index(w));
  }
  j["table"] = table;
  return j;
}

CodePtr load_code(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw SchemaError("failed to parse " + path + ": " + e.what());
  }
  return code_from_json(j);
}

std::string path_to_string(const SamplePath& path) {
  bool single = true;
  for (const auto& l : path.alphabet->labels())
    if (l.size() != 1) single = false;
  std::string out;
  for (size_t i = 0; i < path.symbols.size(); ++i) {
    if (!single && i > 0) out += ' ';
    out += path.alphabet->label(path.symbols[i]);
  }
  return out;
}

std::vector<int> parse_path_string(const std::string& text, const Alphabet& alphabet) {
  bool single = true;
  for (const auto& l : alphabet.labels())
    if (l.size() != 1) single = false;
  std::vector<int> symbols;
  if (single) {
    for (char c : text) {
      if (c == ' ') continue;
      symbols.push_back(alphabet.index(std::string(1, c)));
    }
  } else {
    std::istringstream in(text);
    std::string token;
    while (in >> token) symbols.push_back(alphabet.index(token));
  }
  return symbols;
}

json staircase_to_json(const StaircaseSpectrum& s) {
  json jumps = json::array();
  for (const auto& [tau, mass] : s.jumps) jumps.push_back(json::array({tau, mass}));
  return json{{"schema", 1}, {"kind", "staircase"}, {"jumps", jumps}};
}

StaircaseSpectrum staircase_from_json(const json& j) {
  require(j.is_object() && j.contains("jumps"), "staircase requires a 'jumps' array");
  StaircaseSpectrum s;
  for (const auto& jump : j.at("jumps")) {
    require(jump.is_array() && jump.size() == 2, "each jump is [tau, mass]");
    s.jumps.emplace_back(jump[0].get<double>(), jump[1].get<double>());
  }
  double total = 0.0;
  for (size_t i = 0; i < s.jumps.size(); ++i) {
    require(i == 0 || s.jumps[i].first > s.jumps[i - 1].first,
            "jump locations must be strictly increasing");
    total += s.jumps[i].second;
  }
  require(std::abs(total - 1.0) <= 1e-9, "jump masses must sum to 1");
  return s;
}

json estimate_to_json(const SpectrumEstimate& e) {
  return json{{"schema", 1},       {"kind", "estimate"},
              {"n", e.n},          {"gamma", e.gamma},
              {"num_samples", e.num_samples}, {"seed", e.seed},
              {"tau", e.tau_grid}, {"F", e.cdf}};
}

SpectrumEstimate estimate_from_json(const json& j) {
  require(j.is_object() && j.contains("tau") && j.contains("F"),
          "estimate requires 'tau' and 'F' arrays");
  SpectrumEstimate e;
  e.n = j.value("n", 0);
  e.gamma = j.value("gamma", 0.0);
  e.num_samples = j.value("num_samples", 0LL);
  e.seed = j.value("seed", 0ULL);
  e.tau_grid = j.at("tau").get<std::vector<double>>();
  e.cdf = j.at("F").get<std::vector<double>>();
  require(e.tau_grid.size() == e.cdf.size(), "'tau' and 'F' lengths differ");
  return e;
}

namespace {

std::string csv_rows(const std::vector<double>& tau, const std::vector<double>& f) {
  std::string out = "tau,F\n";
  char buf[80];
  for (size_t i = 0; i < tau.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", tau[i], f[i]);
    out += buf;
  }
  return out;
}

}  // namespace

std::string spectrum_to_csv(const StaircaseSpectrum& s, const std::vector<double>& grid) {
  std::vector<double> f;
  for (double t : grid) f.push_back(s.eval(t));
  return csv_rows(grid, f);
}

std::string spectrum_to_csv(const SpectrumEstimate& e) {
  return csv_rows(e.tau_grid, e.cdf);
}

json dominance_to_json(const DominanceReport& r) {
  return json{{"verdict", r.dominates ? "dominates" : "violated"},
              {"tau_star", r.tau_star},
              {"gap", r.gap}};
}

json finite_bound_to_json(const FiniteBoundReport& r) {
  return json{{"lhs", r.lhs},
              {"rhs_terms",
               {{"spectrum", r.rhs_spectrum},
                {"mismatch", r.rhs_mismatch},
                {"counting", r.rhs_counting}}},
              {"rhs", r.rhs()},
              {"exponent", r.exponent},
              {"trivially_pass", r.trivially_pass},
              {"pass", r.pass}};
}

json change_of_measure_to_json(const ChangeOfMeasureReport& r) {
  return json{{"lhs", r.lhs}, {"bound", r.bound}, {"pass", r.pass}};
}

json certificate_to_json(const IsomorphismCertificate& c) {
  return json{{"samples", c.samples},
              {"path_length", c.path_length},
              {"k_block", c.k_block},
              {"seed", c.seed},
              {"round_trip_failure_rate", c.round_trip_failure_rate},
              {"classification_accuracy", c.classification_accuracy},
              {"image_classification_agreement", c.image_classification_agreement},
              {"tv_distance", c.tv_distance},
              {"classification_confusion_matrix", c.confusion}};
}

json obstruction_to_json(const IsomorphismObstruction& o) {
  auto flag = [](ErgodicityFlag f) {
    return f == ErgodicityFlag::Ergodic ? "ergodic" : "non_ergodic_mixture";
  };
  return json{{"spectrum_x", staircase_to_json(o.spectrum_x)},
              {"spectrum_y", staircase_to_json(o.spectrum_y)},
              {"spectra_equal", o.spectra_equal},
              {"ergodicity_x", flag(o.flag_x)},
              {"ergodicity_y", flag(o.flag_y)},
              {"verdict", o.verdict}};
}

std::string dump_json(const json& j) {
  json rounded = j;
  round_numbers(rounded);
  return rounded.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spectrascope
