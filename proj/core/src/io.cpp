#include "lms/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lms::io {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool try_parse(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw NumericalError("write failed for " + path.string());
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  if (!try_parse(trim(text), v)) throw InvalidInput(context + ": '" + std::string(text) + "' is not a number");
  return v;
}

Table parse_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  Table table;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) numeric = numeric && try_parse(cells[c], row[c]);
    if (first_content) {
      first_content = false;
      width = cells.size();
      if (!numeric) {
        table.header = cells;
        continue;
      }
    }
    if (cells.size() != width) {
      throw InvalidInput(source + " line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                         " columns, found " + std::to_string(cells.size()));
    }
    if (!numeric) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        double tmp;
        if (!try_parse(cells[c], tmp)) {
          throw InvalidInput(source + " line " + std::to_string(line_no) + " column " + std::to_string(c + 1) +
                             ": '" + cells[c] + "' is not a number");
        }
      }
    }
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return table;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path.string());
}

void write_csv(const std::filesystem::path& path, const Matrix& values, const std::vector<std::string>& header) {
  auto out = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
  close_checked(out, path);
}

void write_matrix(const std::filesystem::path& path, const Matrix& values) { write_csv(path, values); }

Matrix read_matrix(const std::filesystem::path& path) { return read_csv(path).values; }

Matrix ingest(const std::filesystem::path& path) {
  auto table = read_csv(path);
  if (table.values.rows() == 0 || table.values.cols() == 0) throw InvalidInput(path.string() + ": no data rows");
  for (Index i = 0; i < table.values.rows(); ++i) {
    for (Index j = 0; j < table.values.cols(); ++j) {
      if (!std::isfinite(table.values(i, j))) {
        throw InvalidInput(path.string() + ": non-finite value at data row " + std::to_string(i + 1) + " column " +
                           std::to_string(j + 1));
      }
    }
  }
  return std::move(table.values);
}

void write_latents(const std::filesystem::path& path, const latent::LatentSample& Z) {
  std::vector<std::string> header;
  if (Z.is_discrete()) {
    header = {"atom"};
  } else {
    for (Index j = 0; j < Z.points.cols(); ++j) header.push_back("z" + std::to_string(j + 1));
  }
  write_csv(path, Z.points, header);
}

void write_scores(const std::filesystem::path& path, const Matrix& scores) {
  std::vector<std::string> header;
  for (Index j = 0; j < scores.cols(); ++j) header.push_back("pc" + std::to_string(j + 1));
  write_csv(path, scores, header);
}

void write_diagram(const std::filesystem::path& path, const rips::PersistenceDiagram& diagram) {
  auto out = open_out(path);
  out << "dim,birth,death,flagged\n";
  for (const auto& p : diagram.points) {
    out << p.dim << ',' << format_double(p.birth) << ',' << format_double(p.death) << ',' << (p.flagged ? 1 : 0)
        << '\n';
  }
  close_checked(out, path);
}

rips::PersistenceDiagram read_diagram(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  if (table.values.cols() != 4) throw InvalidInput(path.string() + ": diagram needs columns dim,birth,death,flagged");
  rips::PersistenceDiagram dgm;
  for (Index i = 0; i < table.values.rows(); ++i) {
    rips::DiagramPoint p;
    p.dim = static_cast<int>(table.values(i, 0));
    p.birth = table.values(i, 1);
    p.death = table.values(i, 2);
    p.flagged = table.values(i, 3) != 0.0;
    if (p.flagged) dgm.max_scale = std::max(dgm.max_scale, p.death);
    dgm.points.push_back(p);
  }
  return dgm;
}

void write_dim_curve(const std::filesystem::path& path, const dimselect::DimSelectReport& report) {
  auto out = open_out(path);
  out << "r,d_r\n";
  for (const auto& c : report.curve) out << c.r << ',' << format_double(c.d) << '\n';
  close_checked(out, path);
}

void write_error_curve(const std::filesystem::path& path, const knn::ErrorCurve& curve) {
  auto out = open_out(path);
  const bool named = curve.metric == knn::Metric::OneMinusR2;
  const char* metric = named ? "one_minus_r2" : "misclassification";
  out << "r,metric,mean,p5,p95" << (named ? ",target_name" : "") << '\n';
  for (const auto& row : curve.rows) {
    out << row.r << ',' << metric << ',' << format_double(row.mean) << ',' << format_double(row.p5) << ','
        << format_double(row.p95);
    if (named) out << ',' << row.target;
    out << '\n';
  }
  close_checked(out, path);
}

void write_labels(const std::filesystem::path& path, const knn::Labels& labels) {
  auto out = open_out(path);
  out << "label\n";
  for (int l : labels) out << l << '\n';
  close_checked(out, path);
}

}  // namespace lms::io
