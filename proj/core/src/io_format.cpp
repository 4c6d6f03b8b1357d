#include "twistor/io_format.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "twistor/beta.hpp"
#include "twistor/errors.hpp"

namespace twistor {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if ((unsigned char)c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void JsonEmitter::newline() {
  if (indent_ <= 0) return;
  out_ += '\n';
  out_.append(indent_ * stack_.size(), ' ');
}

void JsonEmitter::before_value() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!stack_.empty()) {
    require(stack_.back() == '[', "JsonEmitter: value needs a key inside an object");
    if (!empty_.back()) out_ += ',';
    newline();
    empty_.back() = false;
  }
}

JsonEmitter& JsonEmitter::obj() {
  before_value();
  out_ += '{';
  stack_.push_back('{');
  empty_.push_back(true);
  return *this;
}

JsonEmitter& JsonEmitter::arr() {
  before_value();
  out_ += '[';
  stack_.push_back('[');
  empty_.push_back(true);
  return *this;
}

JsonEmitter& JsonEmitter::close() {
  require(!stack_.empty(), "JsonEmitter: close without open");
  const char opener = stack_.back();
  const bool was_empty = empty_.back();
  stack_.pop_back();
  empty_.pop_back();
  if (!was_empty) newline();
  out_ += opener == '{' ? '}' : ']';
  return *this;
}

JsonEmitter& JsonEmitter::key(const std::string& k) {
  require(!stack_.empty() && stack_.back() == '{', "JsonEmitter: key outside object");
  if (!empty_.back()) out_ += ',';
  empty_.back() = false;
  newline();
  out_ += '"';
  out_ += json_escape(k);
  out_ += indent_ <= 0 ? "\":" : "\": ";
  pending_key_ = true;
  return *this;
}

JsonEmitter& JsonEmitter::num(double v) {
  before_value();
  out_ += fmt_g17(v);
  return *this;
}

JsonEmitter& JsonEmitter::integer(long long v) {
  before_value();
  out_ += std::to_string(v);
  return *this;
}

JsonEmitter& JsonEmitter::str(const std::string& v) {
  before_value();
  out_ += '"';
  out_ += json_escape(v);
  out_ += '"';
  return *this;
}

JsonEmitter& JsonEmitter::boolean(bool v) {
  before_value();
  out_ += v ? "true" : "false";
  return *this;
}

JsonEmitter& JsonEmitter::z(cplx v) {
  arr();
  num(v.real());
  num(v.imag());
  return close();
}

std::string JsonEmitter::take() {
  require(stack_.empty(), "JsonEmitter: unclosed scope");
  return std::move(out_);
}

void csv_header(std::ostream& os, const std::vector<std::string>& cols) {
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

void csv_row(std::ostream& os, const std::vector<double>& vals) {
  for (size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << fmt_g17(vals[i]);
  os << '\n';
}

// ---- twistor map container --------------------------------------------------
// One JSON header line, then the listed modes as raw little-endian doubles
// (re, im per node, node index i * n_theta + j). A loaded custom-kind map
// carries no conformal factor; evaluation works regardless (only the grid
// and modes are needed) and certificate calls take the metric separately.

static_assert(std::endian::native == std::endian::little,
              "container payload is little-endian; add byte swapping for this platform");

void save_twistor_map(const TwistorMap& map, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path);

  const char* kind = map.metric.kind == MetricKind::euclidean ? "euclidean"
                     : map.metric.kind == MetricKind::constant_curvature ? "cc"
                                                                         : "custom";
  const char* prov = map.provenance == MapProvenance::pipeline ? "pipeline"
                     : map.provenance == MapProvenance::oracle_cc ? "oracle_cc"
                                                                  : "euclidean";
  JsonEmitter e(0);
  e.obj()
      .field("format", "twistor-map")
      .field("version", 1)
      .field("kind", kind)
      .field("kappa", map.metric.kappa)
      .field("R", map.grid.R)
      .field("rotational", map.metric.rotationally_symmetric)
      .field("n_r", map.grid.n_r)
      .field("n_theta", map.grid.n_theta)
      .field("k_max", map.k_max)
      .field("provenance", prov)
      .field("map_kappa", map.kappa)
      .field("truncation_bound", map.truncation_bound)
      .field("solver_residual", map.solver_residual);
  e.key("modes").arr();
  for (int comp = 0; comp < 2; ++comp)
    for (int k = comp; k <= map.k_max; k += 2)
      if (map.has_mode(comp, k)) e.arr().integer(comp).integer(k).close();
  e.close().close();
  os << e.take() << '\n';

  for (int comp = 0; comp < 2; ++comp)
    for (int k = comp; k <= map.k_max; k += 2)
      if (map.has_mode(comp, k)) {
        const auto& v = map.mode(comp, k);
        os.write(reinterpret_cast<const char*>(v.data()),
                 (std::streamsize)(v.size() * sizeof(cplx)));
      }
  if (!os) throw ConfigError("write failed: " + path);
}

TwistorMap load_twistor_map(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open: " + path);
  std::string header;
  if (!std::getline(is, header)) throw ConfigError("container truncated: " + path);

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("container header parse failure in " + path + ": " + ex.what());
  }
  if (j.value("format", "") != "twistor-map" || j.value("version", 0) != 1)
    throw ConfigError("not a twistor-map container: " + path);

  TwistorMap map;
  const std::string kind = j.at("kind");
  const double R = j.at("R");
  const double kappa = j.at("kappa");
  if (kind == "euclidean")
    map.metric = euclidean_metric(R);
  else if (kind == "cc")
    map.metric = constant_curvature_metric(kappa, R);
  else if (kind == "custom") {
    map.metric.kind = MetricKind::custom;
    map.metric.R = R;
    map.metric.rotationally_symmetric = j.value("rotational", false);
  } else
    throw ConfigError("unknown metric kind in container: " + kind);

  map.grid = PolarGrid(R, j.at("n_r"), j.at("n_theta"));
  map.k_max = j.at("k_max");
  map.kappa = j.value("map_kappa", 0.0);
  map.truncation_bound = j.value("truncation_bound", 0.0);
  map.solver_residual = j.value("solver_residual", 0.0);
  const std::string prov = j.value("provenance", "pipeline");
  map.provenance = prov == "oracle_cc" ? MapProvenance::oracle_cc
                   : prov == "euclidean" ? MapProvenance::euclidean
                                         : MapProvenance::pipeline;

  map.comp0.assign((size_t)map.k_max + 1, {});
  map.comp1.assign((size_t)map.k_max + 1, {});
  for (const auto& mk : j.at("modes")) {
    const int comp = mk.at(0), k = mk.at(1);
    if (comp < 0 || comp > 1 || k < 0 || k > map.k_max || k % 2 != comp)
      throw ConfigError("container lists an invalid mode: " + path);
    std::vector<cplx> v((size_t)map.grid.size());
    is.read(reinterpret_cast<char*>(v.data()), (std::streamsize)(v.size() * sizeof(cplx)));
    if (!is) throw ConfigError("container payload truncated: " + path);
    (comp == 0 ? map.comp0 : map.comp1)[(size_t)k] = std::move(v);
  }
  return map;
}

}  // namespace twistor
