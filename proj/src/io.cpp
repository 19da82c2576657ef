#include "pbreg/io.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pbreg/errors.hpp"

namespace pbreg {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double value = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw validation_error(where + ": expected a number, got '" + t + "'");
  }
  return value;
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long value = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw validation_error(where + ": expected an integer, got '" + t + "'");
  }
  return static_cast<std::int64_t>(value);
}

std::uint64_t parse_uint(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (!t.empty() && t[0] == '-') {
    throw validation_error(where + ": expected a nonnegative integer, got '" + t + "'");
  }
  char* end = nullptr;
  const unsigned long long value = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw validation_error(where + ": expected a nonnegative integer, got '" + t + "'");
  }
  return static_cast<std::uint64_t>(value);
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw io_error("cannot open file for writing: " + path);
  }
  return out;
}

std::filesystem::path sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".json");
}

// --- TOML subset ------------------------------------------------------------
//
// Flat `key = value` lines; `#` comments; arrays of numbers or double-quoted
// strings. That is all the grid configuration needs.

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<std::string> parse_array_elements(const std::string& value, const std::string& where) {
  const std::string t = trim(value);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    throw validation_error(where + ": expected an array like [a, b, c]");
  }
  const std::string body = trim(t.substr(1, t.size() - 2));
  if (body.empty()) {
    return {};
  }
  std::vector<std::string> elements;
  std::string current;
  bool in_string = false;
  for (const char c : body) {
    if (c == '"') {
      in_string = !in_string;
      current.push_back(c);
    } else if (c == ',' && !in_string) {
      elements.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  elements.push_back(trim(current));
  return elements;
}

std::string parse_string_element(const std::string& element, const std::string& where) {
  if (element.size() < 2 || element.front() != '"' || element.back() != '"') {
    throw validation_error(where + ": expected a double-quoted string, got '" + element + "'");
  }
  return element.substr(1, element.size() - 2);
}

void apply_config_key(GridConfig& config, const std::string& key, const std::string& value,
                      const std::string& where) {
  if (key == "theta_values" || key == "beta_values") {
    std::vector<double> values;
    for (const auto& element : parse_array_elements(value, where)) {
      values.push_back(parse_double(element, where));
    }
    (key == "theta_values" ? config.theta_values : config.beta_values) = std::move(values);
  } else if (key == "n_values") {
    config.n_values.clear();
    for (const auto& element : parse_array_elements(value, where)) {
      const std::int64_t n = parse_int(element, where);
      if (n < 1) {
        throw validation_error(where + ": N values must be >= 1");
      }
      config.n_values.push_back(static_cast<std::size_t>(n));
    }
  } else if (key == "realizations") {
    config.realizations = static_cast<int>(parse_int(value, where));
  } else if (key == "df_replicates") {
    config.df_replicates = static_cast<int>(parse_int(value, where));
  } else if (key == "jobs") {
    const std::int64_t jobs = parse_int(value, where);
    if (jobs < 0) {
      throw validation_error(where + ": jobs must be >= 0");
    }
    config.jobs = static_cast<unsigned>(jobs);
  } else if (key == "t_s") {
    config.t_S = parse_double(value, where);
  } else if (key == "t_b") {
    config.t_B = parse_double(value, where);
  } else if (key == "master_seed") {
    config.master_seed = parse_uint(value, where);
  } else if (key == "methods") {
    config.methods.clear();
    for (const auto& element : parse_array_elements(value, where)) {
      config.methods.push_back(method_from_name(parse_string_element(element, where)));
    }
  } else {
    throw validation_error(where + ": unknown key '" + key + "'");
  }
}

GridConfig read_toml_config(std::istream& in, const std::string& path) {
  GridConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path + " line " + std::to_string(line_no);
    const std::string content = trim(strip_comment(line));
    if (content.empty()) {
      continue;
    }
    if (content.front() == '[') {
      throw validation_error(where + ": sections are not supported; use flat key = value lines");
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw validation_error(where + ": expected 'key = value'");
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw validation_error(where + ": expected 'key = value'");
    }
    apply_config_key(config, key, value, where);
  }
  return config;
}

GridConfig read_json_config(std::istream& in, const std::string& path) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw validation_error(path + ": " + e.what());
  }
  if (!j.is_object()) {
    throw validation_error(path + ": config must be a JSON object");
  }
  GridConfig config;
  for (const auto& [key, value] : j.items()) {
    const std::string where = path + " key '" + key + "'";
    try {
      if (key == "theta_values") {
        config.theta_values = value.get<std::vector<double>>();
      } else if (key == "beta_values") {
        config.beta_values = value.get<std::vector<double>>();
      } else if (key == "n_values") {
        config.n_values.clear();
        for (const auto& n : value.get<std::vector<std::int64_t>>()) {
          if (n < 1) {
            throw validation_error(where + ": N values must be >= 1");
          }
          config.n_values.push_back(static_cast<std::size_t>(n));
        }
      } else if (key == "realizations") {
        config.realizations = value.get<int>();
      } else if (key == "df_replicates") {
        config.df_replicates = value.get<int>();
      } else if (key == "jobs") {
        config.jobs = value.get<unsigned>();
      } else if (key == "t_s") {
        config.t_S = value.get<double>();
      } else if (key == "t_b") {
        config.t_B = value.get<double>();
      } else if (key == "master_seed") {
        config.master_seed = value.get<std::uint64_t>();
      } else if (key == "methods") {
        config.methods.clear();
        for (const auto& name : value.get<std::vector<std::string>>()) {
          config.methods.push_back(method_from_name(name));
        }
      } else {
        throw validation_error(where + ": unknown key");
      }
    } catch (const json::exception& e) {
      throw validation_error(where + ": " + e.what());
    }
  }
  return config;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

PairedDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open dataset file: " + path);
  }
  PairedDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path + " line " + std::to_string(line_no);
    const std::string content = trim(line);
    if (content.empty()) {
      continue;
    }
    if (!header_seen) {
      const auto fields = split(content, ',');
      if (fields.size() != 3 || trim(fields[0]) != "x" || trim(fields[1]) != "S" ||
          trim(fields[2]) != "B") {
        throw validation_error(where + ": expected header 'x,S,B'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split(content, ',');
    if (fields.size() != 3) {
      throw validation_error(where + ": expected 3 comma-separated fields");
    }
    dataset.x.push_back(parse_double(fields[0], where));
    const std::int64_t s = parse_int(fields[1], where);
    const std::int64_t b = parse_int(fields[2], where);
    dataset.S.push_back(s);
    dataset.B.push_back(b);
  }
  if (!header_seen) {
    throw validation_error(path + ": empty dataset file (expected header 'x,S,B')");
  }
  validate(dataset);
  return dataset;
}

void write_dataset_csv(const std::string& path, const PairedDataset& dataset) {
  auto out = open_for_write(path);
  out << "x,S,B\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << format_double(dataset.x[i]) << ',' << dataset.S[i] << ',' << dataset.B[i] << '\n';
  }
  if (!out) {
    throw io_error("failed writing dataset file: " + path);
  }
}

bool read_exposure_sidecar(const std::string& csv_path, double& t_S, double& t_B) {
  const auto path = sidecar_path(csv_path);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return false;
  }
  json j;
  try {
    j = json::parse(in);
    t_S = j.at("t_S").get<double>();
    t_B = j.at("t_B").get<double>();
  } catch (const json::exception& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
  return true;
}

void write_exposure_sidecar(const std::string& csv_path, double t_S, double t_B) {
  const auto path = sidecar_path(csv_path).string();
  auto out = open_for_write(path);
  json j;
  j["t_S"] = t_S;
  j["t_B"] = t_B;
  out << j.dump(2) << '\n';
  if (!out) {
    throw io_error("failed writing sidecar file: " + path);
  }
}

GridConfig read_grid_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open config file: " + path);
  }
  const auto extension = std::filesystem::path(path).extension().string();
  if (extension == ".toml") {
    return read_toml_config(in, path);
  }
  if (extension == ".json") {
    return read_json_config(in, path);
  }
  throw validation_error(path + ": config file must end in .toml or .json");
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << "theta,beta,N,M,method,stat_median,stat_plus,stat_minus,"
         "bias_median,bias_plus,bias_minus,zero_fraction,df,df_se,df_replicates\n";
  for (const auto& cell : result.cells) {
    for (const auto& m : cell.methods) {
      out << format_double(cell.theta) << ',' << format_double(cell.beta) << ',' << cell.n_bins
          << ',' << cell.realizations << ',' << method_name(m.method) << ','
          << format_double(m.stat_median) << ',' << format_double(m.stat_plus) << ','
          << format_double(m.stat_minus) << ',' << format_double(m.bias_median) << ','
          << format_double(m.bias_plus) << ',' << format_double(m.bias_minus) << ','
          << format_double(m.zero_fraction) << ',' << format_double(m.df.df) << ','
          << format_double(m.df.standard_error) << ',' << m.df.replicates << '\n';
    }
  }
}

void write_grid_csv(const std::string& path, const GridResult& result) {
  auto out = open_for_write(path);
  write_grid_csv(out, result);
  if (!out) {
    throw io_error("failed writing grid file: " + path);
  }
}

void write_ecdf_csv(const std::string& path, const EcdfSeries& series) {
  auto out = open_for_write(path);
  out << "value,probability\n";
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    out << format_double(series.values[k]) << ',' << format_double(series.probabilities[k])
        << '\n';
  }
  if (!out) {
    throw io_error("failed writing ecdf file: " + path);
  }
}

void write_ecdf_svg(const std::string& path, const EcdfSeries& series) {
  constexpr double kWidth = 640.0, kHeight = 440.0;
  constexpr double kLeft = 60.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double lo = series.values.front();
  double hi = series.values.back();
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const auto map_x = [&](double v) { return kLeft + (v - lo) / (hi - lo) * plot_w; };
  const auto map_y = [&](double p) { return kTop + (1.0 - p) * plot_h; };

  auto out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(kWidth)
      << "\" height=\"" << format_double(kHeight) << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes.
  out << "  <line x1=\"" << format_double(kLeft) << "\" y1=\"" << format_double(map_y(0.0))
      << "\" x2=\"" << format_double(kWidth - kRight) << "\" y2=\"" << format_double(map_y(0.0))
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << format_double(kLeft) << "\" y1=\"" << format_double(map_y(0.0))
      << "\" x2=\"" << format_double(kLeft) << "\" y2=\"" << format_double(map_y(1.0))
      << "\" stroke=\"black\"/>\n";
  // Staircase.
  out << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  double prev_p = 0.0;
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    const double x = map_x(series.values[k]);
    out << format_double(x) << ',' << format_double(map_y(prev_p)) << ' ';
    out << format_double(x) << ',' << format_double(map_y(series.probabilities[k]));
    if (k + 1 < series.values.size()) {
      out << ' ';
    }
    prev_p = series.probabilities[k];
  }
  out << "\"/>\n";
  if (!series.label.empty()) {
    out << "  <text x=\"" << format_double(kLeft) << "\" y=\""
        << format_double(kHeight - 12.0) << "\" font-family=\"sans-serif\" font-size=\"14\">"
        << series.label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) {
    throw io_error("failed writing svg file: " + path);
  }
}

void write_samples_json(const std::string& path, const SimCellSummary& summary,
                        const CellSamples& samples,
                        const std::vector<std::string>& dataset_files) {
  json j;
  j["schema_version"] = 1;
  json cell;
  cell["theta"] = summary.theta;
  cell["beta"] = summary.beta;
  cell["n_bins"] = summary.n_bins;
  cell["realizations"] = summary.realizations;
  cell["master_seed"] = summary.master_seed;
  if (!samples.datasets.empty()) {
    cell["t_S"] = samples.datasets.front().t_S;
    cell["t_B"] = samples.datasets.front().t_B;
  }
  j["cell"] = cell;
  json methods = json::array();
  for (const auto& ms : samples.methods) {
    json entry;
    entry["method"] = method_name(ms.method);
    entry["theta_hat"] = ms.theta_hat;
    entry["statistic"] = ms.statistic;
    json boundary = json::array();
    for (const char flag : ms.at_boundary) {
      boundary.push_back(static_cast<int>(flag));
    }
    entry["at_boundary"] = boundary;
    methods.push_back(entry);
  }
  j["methods"] = methods;
  j["dataset_files"] = dataset_files;
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  if (!out) {
    throw io_error("failed writing samples file: " + path);
  }
}

}  // namespace pbreg
