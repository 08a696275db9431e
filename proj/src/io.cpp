#include "wlest/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace wlest::io {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string fixed2(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(what + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(what + "." + key + ": " + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // The message carries line and column.
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  // from_chars rejects a leading '+'.
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != last ||
      !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + field +
                     "' is not a finite number");
  }
  return value;
}

/// Non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.emplace_back(no, line);
  }
  return lines;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + ": expected a matrix object");
  const auto rows = get_field<long long>(j, "rows", what);
  const auto cols = get_field<long long>(j, "cols", what);
  const auto re = get_field<std::vector<double>>(j, "re", what);
  const auto im = get_field<std::vector<double>>(j, "im", what);
  if (rows <= 0 || cols <= 0) {
    throw DimensionError(what + ": rows and cols must be positive");
  }
  const auto count = static_cast<std::size_t>(rows * cols);
  if (re.size() != count || im.size() != count) {
    std::ostringstream os;
    os << what << ": " << rows << "x" << cols << " needs " << count
       << " entries, got re=" << re.size() << " im=" << im.size();
    throw DimensionError(os.str());
  }
  ComplexMatrix m(rows, cols);
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(r * cols + c);
      m(r, c) = {re[k], im[k]};
    }
  }
  require_finite(m, what);
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re;
  std::vector<double> im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

namespace {

AugmentedCovariance<double> covariance_from_json(const json& j,
                                                 const std::string& what,
                                                 bool tilde_optional) {
  if (!j.is_object()) throw ParseError(what + ": expected an object");
  AugmentedCovariance<double> cov;
  if (!j.contains("C")) throw ParseError(what + ": missing field 'C'");
  cov.C = matrix_from_json(j.at("C"), what + ".C");
  if (j.contains("C_tilde")) {
    cov.Ct = matrix_from_json(j.at("C_tilde"), what + ".C_tilde");
  } else if (tilde_optional) {
    cov.Ct = ComplexMatrix::Zero(cov.C.rows(), cov.C.cols());
  } else {
    throw ParseError(what + ": missing field 'C_tilde'");
  }
  return cov;
}

}  // namespace

LinearModel<double> model_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("model: expected a JSON object");
  if (!j.contains("H")) throw ParseError("model: missing field 'H'");
  if (!j.contains("noise")) throw ParseError("model: missing field 'noise'");
  LinearModel<double> model;
  model.H = matrix_from_json(j.at("H"), "H");
  model.noise = covariance_from_json(j.at("noise"), "noise", true);
  if (j.contains("prior") && !j.at("prior").is_null()) {
    model.prior = covariance_from_json(j.at("prior"), "prior", false);
  }
  model.validate();
  return model;
}

json model_to_json(const LinearModel<double>& model) {
  json j;
  j["H"] = matrix_to_json(model.H);
  j["noise"] = {{"C", matrix_to_json(model.noise.C)},
                {"C_tilde", matrix_to_json(model.noise.Ct)}};
  if (model.prior) {
    j["prior"] = {{"C", matrix_to_json(model.prior->C)},
                  {"C_tilde", matrix_to_json(model.prior->Ct)}};
  }
  return j;
}

LinearModel<double> parse_model_file(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path));
}

void write_model_file(const std::filesystem::path& path,
                      const LinearModel<double>& model) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << model_to_json(model).dump(2) << '\n';
}

SweepConfig sweep_config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  SweepConfig config;
  if (j.contains("dft")) {
    const json& dft = j.at("dft");
    const std::string what = "config.dft";
    if (dft.contains("size")) config.dft_size = get_field<Eigen::Index>(dft, "size", what);
    if (dft.contains("rows")) config.dft_rows = get_field<Eigen::Index>(dft, "rows", what);
    if (dft.contains("cols")) config.dft_cols = get_field<Eigen::Index>(dft, "cols", what);
    if (dft.contains("Ts")) config.sampling_time = get_field<double>(dft, "Ts", what);
  }
  if (j.contains("sigma2")) {
    const json& s = j.at("sigma2");
    const std::string what = "config.sigma2";
    if (s.contains("min")) config.sigma2_min = get_field<double>(s, "min", what);
    if (s.contains("max")) config.sigma2_max = get_field<double>(s, "max", what);
    if (s.contains("points")) {
      const auto points = get_field<long long>(s, "points", what);
      if (points <= 0) throw ConfigurationError("config.sigma2.points must be positive");
      config.sigma2_points = static_cast<std::size_t>(points);
    }
    if (s.contains("scale")) {
      const auto scale = get_field<std::string>(s, "scale", what);
      if (scale == "log") {
        config.log_scale = true;
      } else if (scale == "linear") {
        config.log_scale = false;
      } else {
        throw ConfigurationError("config.sigma2.scale must be 'log' or 'linear'");
      }
    }
  }
  if (j.contains("trials")) {
    const auto trials = get_field<long long>(j, "trials", "config");
    if (trials <= 0) throw ConfigurationError("config.trials must be positive");
    config.trials = static_cast<std::size_t>(trials);
  }
  if (j.contains("seed")) config.seed = get_field<std::uint64_t>(j, "seed", "config");
  if (j.contains("estimators")) {
    const auto names = get_field<std::vector<std::string>>(j, "estimators", "config");
    config.estimators.clear();
    for (const auto& name : names) config.estimators.push_back(parse_estimator(name));
  }
  config.validate();
  return config;
}

json sweep_config_to_json(const SweepConfig& config) {
  std::vector<std::string> names;
  for (Estimator e : config.estimators) names.emplace_back(estimator_name(e));
  return json{
      {"dft",
       {{"size", config.dft_size},
        {"rows", config.dft_rows},
        {"cols", config.dft_cols},
        {"Ts", config.sampling_time}}},
      {"sigma2",
       {{"min", config.sigma2_min},
        {"max", config.sigma2_max},
        {"points", config.sigma2_points},
        {"scale", config.log_scale ? "log" : "linear"}}},
      {"trials", config.trials},
      {"seed", config.seed},
      {"estimators", names}};
}

SweepConfig parse_sweep_config_file(const std::filesystem::path& path) {
  return sweep_config_from_json(read_json_file(path));
}

ComplexVector read_measurements(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError("measurements: empty file");
  const auto header = split_csv_line(lines.front().second);
  if (header != std::vector<std::string>{"re", "im"}) {
    throw ParseError("measurements: header must be 're,im'");
  }
  if (lines.size() < 2) throw ParseError("measurements: no data rows");
  ComplexVector y(static_cast<Eigen::Index>(lines.size() - 1));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, text] = lines[i];
    const auto fields = split_csv_line(text);
    if (fields.size() != 2) {
      throw ParseError("measurements line " + std::to_string(no) +
                       ": expected 2 fields");
    }
    y[static_cast<Eigen::Index>(i - 1)] = {parse_number(fields[0], no),
                                           parse_number(fields[1], no)};
  }
  return y;
}

ComplexVector read_measurements_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return read_measurements(in);
}

void write_measurements(std::ostream& out, const ComplexVector& y) {
  out << "re,im\n";
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out << format_double(y[i].real()) << ',' << format_double(y[i].imag())
        << '\n';
  }
}

void write_estimate(std::ostream& out, const EstimateResult<double>& result) {
  const bool with_var = result.covariance.has_value();
  out << (with_var ? "re,im,var\n" : "re,im\n");
  for (Eigen::Index i = 0; i < result.x_hat.size(); ++i) {
    out << format_double(result.x_hat[i].real()) << ','
        << format_double(result.x_hat[i].imag());
    if (with_var) out << ',' << format_double((*result.covariance)(i, i).real());
    out << '\n';
  }
}

void write_results(std::ostream& out, const BmseTable& table) {
  out << "sigma2";
  for (Estimator e : table.estimators) out << ',' << estimator_name(e);
  out << '\n';
  for (const BmseRow& row : table.rows) {
    out << format_double(row.sigma2);
    for (double v : row.bmse) out << ',' << format_double(v);
    out << '\n';
  }
}

std::string results_to_csv(const BmseTable& table) {
  std::ostringstream os;
  write_results(os, table);
  return os.str();
}

ResultsCsv read_results(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError("results: empty file");
  const auto header = split_csv_line(lines.front().second);
  if (header.size() < 2 || header.front() != "sigma2") {
    throw ParseError("results: header must be 'sigma2,<estimator>,...'");
  }
  ResultsCsv out;
  out.columns.assign(header.begin() + 1, header.end());
  for (const auto& c : out.columns) {
    if (c.empty()) throw ParseError("results: empty column name");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, text] = lines[i];
    const auto fields = split_csv_line(text);
    if (fields.size() != header.size()) {
      throw ParseError("results line " + std::to_string(no) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    const double s2 = parse_number(fields[0], no);
    if (!out.sigma2.empty() && !(s2 > out.sigma2.back())) {
      throw ParseError("results line " + std::to_string(no) +
                       ": sigma2 must be strictly increasing");
    }
    out.sigma2.push_back(s2);
    std::vector<double> row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      row.push_back(parse_number(fields[k], no));
    }
    out.values.push_back(std::move(row));
  }
  if (out.sigma2.empty()) throw ParseError("results: no data rows");
  return out;
}

std::string render_svg(const ResultsCsv& results) {
  if (results.sigma2.empty()) throw ParseError("results: no data rows");
  double x_min = results.sigma2.front();
  double x_max = results.sigma2.back();
  double y_min = HUGE_VAL;
  double y_max = -HUGE_VAL;
  for (const auto& row : results.values) {
    for (double v : row) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (!(x_min > 0.0) || !(y_min > 0.0)) {
    throw ValidationError("results: log axes need positive values");
  }

  const auto decades = [](double lo, double hi) {
    int a = static_cast<int>(std::floor(std::log10(lo) + 1e-9));
    int b = static_cast<int>(std::ceil(std::log10(hi) - 1e-9));
    if (b <= a) b = a + 1;
    return std::pair{a, b};
  };
  const auto [xd0, xd1] = decades(x_min, x_max);
  const auto [yd0, yd1] = decades(y_min, y_max);

  constexpr double width = 760.0;
  constexpr double height = 480.0;
  constexpr double left = 80.0;
  constexpr double right = 200.0;
  constexpr double top = 30.0;
  constexpr double bottom = 60.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto px = [&](double x) {
    return left + (std::log10(x) - xd0) / (xd1 - xd0) * plot_w;
  };
  const auto py = [&](double y) {
    return top + plot_h - (std::log10(y) - yd0) / (yd1 - yd0) * plot_h;
  };
  static constexpr const char* kColors[] = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
      "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(width)
     << "\" height=\"" << fixed2(height) << "\" viewBox=\"0 0 "
     << fixed2(width) << ' ' << fixed2(height) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fixed2(width) << "\" height=\""
     << fixed2(height) << "\" fill=\"white\"/>\n";

  os << "<g class=\"x-ticks\" font-family=\"sans-serif\" font-size=\"12\" "
        "text-anchor=\"middle\">\n";
  for (int d = xd0; d <= xd1; ++d) {
    const double x = left + static_cast<double>(d - xd0) / (xd1 - xd0) * plot_w;
    os << "<line x1=\"" << fixed2(x) << "\" y1=\"" << fixed2(top)
       << "\" x2=\"" << fixed2(x) << "\" y2=\"" << fixed2(top + plot_h)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fixed2(x) << "\" y=\"" << fixed2(top + plot_h + 18)
       << "\">1e" << d << "</text>\n";
  }
  os << "</g>\n";
  os << "<g class=\"y-ticks\" font-family=\"sans-serif\" font-size=\"12\" "
        "text-anchor=\"end\">\n";
  for (int d = yd0; d <= yd1; ++d) {
    const double y =
        top + plot_h - static_cast<double>(d - yd0) / (yd1 - yd0) * plot_h;
    os << "<line x1=\"" << fixed2(left) << "\" y1=\"" << fixed2(y)
       << "\" x2=\"" << fixed2(left + plot_w) << "\" y2=\"" << fixed2(y)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fixed2(left - 6) << "\" y=\"" << fixed2(y + 4)
       << "\">1e" << d << "</text>\n";
  }
  os << "</g>\n";
  os << "<rect x=\"" << fixed2(left) << "\" y=\"" << fixed2(top)
     << "\" width=\"" << fixed2(plot_w) << "\" height=\"" << fixed2(plot_h)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fixed2(left + plot_w / 2) << "\" y=\""
     << fixed2(height - 15)
     << "\" font-family=\"sans-serif\" font-size=\"14\" "
        "text-anchor=\"middle\">sigma2</text>\n";
  os << "<text transform=\"translate(20," << fixed2(top + plot_h / 2)
     << ") rotate(-90)\" font-family=\"sans-serif\" font-size=\"14\" "
        "text-anchor=\"middle\">average BMSE</text>\n";

  const std::size_t n_rows = results.sigma2.size();
  for (std::size_t c = 0; c < results.columns.size(); ++c) {
    const char* color = kColors[c % std::size(kColors)];
    if (n_rows > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t r = 0; r < n_rows; ++r) {
        if (r) os << ' ';
        os << fixed2(px(results.sigma2[r])) << ','
           << fixed2(py(results.values[r][c]));
      }
      os << "\"/>\n";
    } else {
      os << "<circle cx=\"" << fixed2(px(results.sigma2[0])) << "\" cy=\""
         << fixed2(py(results.values[0][c])) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    }
  }

  os << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t c = 0; c < results.columns.size(); ++c) {
    const char* color = kColors[c % std::size(kColors)];
    const double y = top + 10 + 18 * static_cast<double>(c);
    const double x = left + plot_w + 15;
    os << "<line x1=\"" << fixed2(x) << "\" y1=\"" << fixed2(y) << "\" x2=\""
       << fixed2(x + 25) << "\" y2=\"" << fixed2(y) << "\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << fixed2(x + 32) << "\" y=\"" << fixed2(y + 4)
       << "\">" << xml_escape(results.columns[c]) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace wlest::io
