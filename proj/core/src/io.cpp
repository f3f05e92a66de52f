#include "discgs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "discgs/error.hpp"

namespace discgs {
namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record; double quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ": line " + std::to_string(line);
}

double parse_double(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw IoError(where(path, line) + ": non-numeric value '" + cell + "'");
  }
  if (!std::isfinite(v)) throw IoError(where(path, line) + ": non-finite value '" + cell + "'");
  return v;
}

int parse_int(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw IoError(where(path, line) + ": expected an integer, got '" + cell + "'");
  }
  return v;
}

// Reads header + rows, skipping blank lines. Each row has the header's width.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

RawTable read_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  RawTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_record(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw IoError(where(path, line_no) + ": expected " + std::to_string(t.header.size()) +
                    " fields, got " + std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  if (t.header.empty()) throw IoError(path.string() + ": missing header");
  if (t.rows.empty()) throw IoError(path.string() + ": no rows");
  return t;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

Dataset read_dataset(const std::filesystem::path& path) {
  const RawTable t = read_table(path);
  std::optional<std::size_t> label_col;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == "label") label_col = c;
  }
  const std::size_t d = t.header.size() - (label_col ? 1 : 0);
  if (d == 0) throw IoError(path.string() + ": no feature columns");

  Dataset ds;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c != label_col) ds.columns.push_back(t.header[c]);
  }
  ds.data.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(d));
  if (label_col) ds.labels.emplace(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (c == label_col) {
        (*ds.labels)[r] = parse_int(t.rows[r][c], path, t.line_numbers[r]);
      } else {
        ds.data(static_cast<Eigen::Index>(r), col++) =
            parse_double(t.rows[r][c], path, t.line_numbers[r]);
      }
    }
  }
  return ds;
}

void write_dataset(const std::filesystem::path& path, const DataMatrix& data) {
  auto out = open_out(path);
  for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << 'x' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (!std::isfinite(data(r, c))) throw IoError("refusing to write a non-finite value");
      out << (c ? "," : "") << format_double(data(r, c));
    }
    out << '\n';
  }
  finish(out, path);
}

Labels read_labels(const std::filesystem::path& path) {
  const RawTable t = read_table(path);
  if (t.header.size() != 2 || t.header[0] != "index" || t.header[1] != "label") {
    throw IoError(path.string() + ": labels file needs the header 'index,label'");
  }
  Labels labels(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int index = parse_int(t.rows[r][0], path, t.line_numbers[r]);
    if (index != static_cast<int>(r)) {
      throw IoError(where(path, t.line_numbers[r]) + ": expected index " + std::to_string(r));
    }
    labels[r] = parse_int(t.rows[r][1], path, t.line_numbers[r]);
  }
  return labels;
}

void write_labels(const std::filesystem::path& path, std::span<const int> labels) {
  auto out = open_out(path);
  out << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  finish(out, path);
}

void write_metrics(const std::filesystem::path& path, const MetricsReport& report) {
  json j;
  j["num_clusters_pred"] = report.num_clusters_pred;
  if (report.scores) {
    j["ari"] = report.scores->ari;
    j["nmi"] = report.scores->nmi;
    j["acc"] = report.scores->acc;
    j["num_clusters_true"] = report.scores->num_clusters_true;
    j["nmi_normalization"] = "arithmetic";
  }
  write_text(path, j.dump(2) + "\n");
}

void write_trace(const std::filesystem::path& path, const RunTrace& trace) {
  json arr = json::array();
  for (const auto& r : trace) {
    json j;
    j["iteration"] = r.iteration;
    j["log_joint"] = r.log_joint;
    j["num_clusters"] = r.num_clusters;
    j["ari"] = r.ari ? json(*r.ari) : json(nullptr);
    j["wall_seconds"] = r.wall_seconds;
    arr.push_back(std::move(j));
  }
  write_text(path, arr.dump(2) + "\n");
}

RunTrace read_trace(const std::filesystem::path& path) {
  auto in = open_in(path);
  RunTrace trace;
  try {
    const json arr = json::parse(in);
    for (const auto& j : arr) {
      IterationRecord r;
      r.iteration = j.at("iteration").get<int>();
      r.log_joint = j.at("log_joint").get<double>();
      r.num_clusters = j.at("num_clusters").get<int>();
      if (!j.at("ari").is_null()) r.ari = j.at("ari").get<double>();
      r.wall_seconds = j.at("wall_seconds").get<double>();
      trace.push_back(r);
    }
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": malformed trace: " + e.what());
  }
  return trace;
}

GmmSpec read_gmm_spec(const std::filesystem::path& path, std::uint64_t seed) {
  auto in = open_in(path);
  GmmSpec spec;
  spec.seed = seed;
  try {
    const json j = json::parse(in);
    spec.n = j.at("n").get<std::size_t>();
    for (const auto& c : j.at("components")) {
      GmmComponent comp;
      comp.weight = c.at("weight").get<double>();
      const auto mean = c.at("mean").get<std::vector<double>>();
      comp.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
      const auto cov = c.at("covariance").get<std::vector<std::vector<double>>>();
      comp.covariance.resize(static_cast<Eigen::Index>(cov.size()),
                             static_cast<Eigen::Index>(cov.size()));
      for (std::size_t r = 0; r < cov.size(); ++r) {
        if (cov[r].size() != cov.size()) throw IoError(path.string() + ": covariance not square");
        for (std::size_t col = 0; col < cov.size(); ++col) {
          comp.covariance(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
              cov[r][col];
        }
      }
      spec.components.push_back(std::move(comp));
    }
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": malformed mixture spec: " + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace discgs
