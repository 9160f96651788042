#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pdlearn/complex.hpp"
#include "pdlearn/image.hpp"
#include "pdlearn/inverse.hpp"
#include "pdlearn/mlmodel.hpp"
#include "pdlearn/pimage.hpp"
#include "pdlearn/reduce.hpp"

namespace pdlearn::io {

namespace fs = std::filesystem;

// ---- point clouds: CSV, one point per row ----
void write_point_cloud_csv(const PointCloud& pc, const fs::path& path);
PointCloud read_point_cloud_csv(const fs::path& path);

// ---- binary images: text rows of 0/1, and PNG (nonzero channel = white) ----
void write_image_text(const BinaryImage& img, const fs::path& path);
BinaryImage read_image_text(const fs::path& path);
void write_image_png(const BinaryImage& img, const fs::path& path);
BinaryImage read_image_png(const fs::path& path);
/// 8-bit RGB PNG writer used by the plot commands; `rgb` is row-major, 3
/// bytes per pixel.
void write_png_rgb(const std::vector<std::uint8_t>& rgb, int width, int height,
                   const fs::path& path);

// ---- filtered complex: debug CSV (id,dim,value,boundary-ids) ----
void write_complex_csv(const FilteredComplex& fc, const fs::path& path);

// ---- diagrams: CSV degree,birth,death,birth_x,birth_y,death_vertices ----
void write_diagram_csv(const PersistenceDiagram& dg, const fs::path& path);
PersistenceDiagram read_diagram_csv(const fs::path& path);

// ---- persistence-image vectors / dual diagrams: flat CSV + params sidecar ----
void write_vector_csv(const std::vector<double>& values, const PIParams& params,
                      const fs::path& path);
PersistenceImageVector read_vector_csv(const fs::path& path);
/// Sidecar path convention: `<vector>.json` next to the vector file.
fs::path sidecar_path(const fs::path& vector_path);

// ---- models: single JSON file ----
void write_model_json(const TrainedLinearModel& model, const fs::path& path);
TrainedLinearModel read_model_json(const fs::path& path);

// ---- datasets: CSV matrix + JSON sidecar (layout and targets) ----
void write_dataset(const Dataset& ds, const fs::path& csv_path);
Dataset read_dataset(const fs::path& csv_path);

// ---- inverse-analysis outputs ----
void write_region_json(const SignificantRegion& region, const DualDiagram& dd,
                       const fs::path& path);
void write_selected_pairs_json(const SelectedPairs& pairs, const fs::path& path);

// ---- manifests ----
std::uint64_t fnv1a64_file(const fs::path& path);
struct ManifestInput {
  std::string path;
  std::uint64_t hash;
};
void write_manifest(const fs::path& directory, const std::string& command,
                    const std::string& params_json, std::uint64_t seed,
                    const std::vector<ManifestInput>& inputs,
                    const std::vector<std::string>& outputs);

/// Shortest-length decimal formatting that round-trips doubles; used so that
/// reruns are byte-identical.
std::string format_double(double v);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace pdlearn::io
