#pragma once

// CSV reading and writing with shortest round-trip number formatting.

#include "lms/dimselect.hpp"
#include "lms/knn.hpp"
#include "lms/latent.hpp"
#include "lms/rips.hpp"
#include "lms/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace lms::io {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// Strict full-string parse; throws InvalidInput naming `context` on failure.
double parse_double(std::string_view text, const std::string& context);

struct Table {
  std::vector<std::string> header;  // empty when the file has none
  Matrix values;
};

/// Reads a numeric CSV. A first row containing any non-numeric cell is taken
/// as a header. Ragged rows and non-numeric body cells are errors that name
/// the line and column.
Table read_csv(const std::filesystem::path& path);

/// Same as read_csv, from text already in memory.
Table parse_csv(const std::string& text, const std::string& source = "<memory>");

void write_csv(const std::filesystem::path& path, const Matrix& values, const std::vector<std::string>& header = {});

/// Dense matrix without header.
void write_matrix(const std::filesystem::path& path, const Matrix& values);
Matrix read_matrix(const std::filesystem::path& path);

/// Data matrix from CSV; rejects empty input and non-finite entries.
Matrix ingest(const std::filesystem::path& path);

void write_latents(const std::filesystem::path& path, const latent::LatentSample& Z);
void write_scores(const std::filesystem::path& path, const Matrix& scores);
void write_diagram(const std::filesystem::path& path, const rips::PersistenceDiagram& diagram);
rips::PersistenceDiagram read_diagram(const std::filesystem::path& path);
void write_dim_curve(const std::filesystem::path& path, const dimselect::DimSelectReport& report);
void write_error_curve(const std::filesystem::path& path, const knn::ErrorCurve& curve);
void write_labels(const std::filesystem::path& path, const knn::Labels& labels);

}  // namespace lms::io
