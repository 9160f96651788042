#include "pdlearn/io.hpp"

#include <png.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace pdlearn::io {

using nlohmann::json;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  return v;
}

json grid_to_json(const PIGrid& g) {
  return json{{"b_min", g.b_min}, {"b_max", g.b_max}, {"d_min", g.d_min},
              {"d_max", g.d_max}, {"nb", g.nb},       {"nd", g.nd}};
}

PIGrid grid_from_json(const json& j) {
  PIGrid g;
  g.b_min = j.at("b_min");
  g.b_max = j.at("b_max");
  g.d_min = j.at("d_min");
  g.d_max = j.at("d_max");
  g.nb = j.at("nb");
  g.nd = j.at("nd");
  return g;
}

json params_to_json(const PIParams& p) {
  return json{{"sigma", p.sigma}, {"C", p.C}, {"p", p.p}, {"grid", grid_to_json(p.grid)},
              {"ordering", "row-major, birth fastest: flat = death_index * nb + birth_index"}};
}

PIParams params_from_json(const json& j) {
  PIParams p;
  p.sigma = j.at("sigma");
  p.C = j.at("C");
  p.p = j.at("p");
  p.grid = grid_from_json(j.at("grid"));
  return p;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_point_cloud_csv(const PointCloud& pc, const fs::path& path) {
  auto out = open_out(path);
  for (const auto& p : pc.points) {
    out << format_double(p[0]);
    for (int k = 1; k < pc.dim; ++k) out << ',' << format_double(p[k]);
    out << '\n';
  }
}

PointCloud read_point_cloud_csv(const fs::path& path) {
  auto in = open_in(path);
  PointCloud pc;
  pc.dim = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line, ',');
    if (pc.dim == 0) {
      pc.dim = static_cast<int>(fields.size());
      if (pc.dim < 1 || pc.dim > 3)
        throw std::runtime_error(path.string() + ": points must have 1 to 3 coordinates");
    } else if (static_cast<int>(fields.size()) != pc.dim) {
      throw std::runtime_error(path.string() + ": inconsistent coordinate count");
    }
    std::array<double, 3> p = {0, 0, 0};
    for (int k = 0; k < pc.dim; ++k) p[k] = parse_double(fields[k]);
    pc.points.push_back(p);
  }
  if (pc.points.empty()) throw std::runtime_error(path.string() + ": no points");
  return pc;
}

void write_image_text(const BinaryImage& img, const fs::path& path) {
  img.validate();
  auto out = open_out(path);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) out << (img.at(x, y) ? '1' : '0');
    out << '\n';
  }
}

BinaryImage read_image_text(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::string clean;
    for (char c : line)
      if (c == '0' || c == '1') clean += c;
    if (!clean.empty()) rows.push_back(clean);
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty image");
  BinaryImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < img.height; ++y) {
    if (rows[y].size() != static_cast<std::size_t>(img.width))
      throw std::runtime_error(path.string() + ": ragged rows");
    for (int x = 0; x < img.width; ++x) img.set(x, y, rows[y][x] == '1');
  }
  return img;
}

namespace {

struct PngCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  bool writing = false;
  ~PngCloser() {
    if (png) {
      if (writing)
        png_destroy_write_struct(&png, info ? &info : nullptr);
      else
        png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
    if (fp) std::fclose(fp);
  }
};

}  // namespace

void write_png_rgb(const std::vector<std::uint8_t>& rgb, int width, int height,
                   const fs::path& path) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw std::invalid_argument("write_png_rgb: buffer size mismatch");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  PngCloser ctx;
  ctx.writing = true;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw std::runtime_error("cannot write " + path.string());
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  ctx.info = png_create_info_struct(ctx.png);
  if (setjmp(png_jmpbuf(ctx.png))) throw std::runtime_error("png write failed: " + path.string());
  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  for (int y = 0; y < height; ++y)
    png_write_row(ctx.png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(y) * width * 3));
  png_write_end(ctx.png, nullptr);
}

void write_image_png(const BinaryImage& img, const fs::path& path) {
  img.validate();
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(img.width) * img.height * 3);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t v = img.at(x, y) ? 255 : 0;
      const std::size_t base = (static_cast<std::size_t>(y) * img.width + x) * 3;
      rgb[base] = rgb[base + 1] = rgb[base + 2] = v;
    }
  write_png_rgb(rgb, img.width, img.height, path);
}

BinaryImage read_image_png(const fs::path& path) {
  PngCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw std::runtime_error("cannot open " + path.string());
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  ctx.info = png_create_info_struct(ctx.png);
  if (setjmp(png_jmpbuf(ctx.png))) throw std::runtime_error("png read failed: " + path.string());
  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);
  png_set_expand(ctx.png);
  png_set_strip_16(ctx.png);
  png_read_update_info(ctx.png, ctx.info);
  const int width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  const int height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  const int channels = png_get_channels(ctx.png, ctx.info);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * channels);
  BinaryImage img(width, height);
  for (int y = 0; y < height; ++y) {
    png_read_row(ctx.png, row.data(), nullptr);
    for (int x = 0; x < width; ++x) {
      bool white = false;
      const int color_channels = channels == 2 || channels == 4 ? channels - 1 : channels;
      for (int c = 0; c < color_channels; ++c) white = white || row[x * channels + c] != 0;
      img.set(x, y, white);
    }
  }
  return img;
}

void write_complex_csv(const FilteredComplex& fc, const fs::path& path) {
  auto out = open_out(path);
  out << "id,dim,value,boundary\n";
  for (std::size_t i = 0; i < fc.cells.size(); ++i) {
    const auto& c = fc.cells[i];
    out << i << ',' << c.dim << ',' << format_double(c.value) << ',';
    for (std::size_t k = 0; k < c.boundary.size(); ++k) {
      if (k) out << ';';
      out << c.boundary[k];
    }
    out << '\n';
  }
}

void write_diagram_csv(const PersistenceDiagram& dg, const fs::path& path) {
  auto out = open_out(path);
  out << "degree,birth,death,birth_x,birth_y,death_vertices\n";
  for (const auto& p : dg.pairs) {
    const auto bp = p.birth_pos();
    out << p.degree << ',' << format_double(p.birth) << ',' << format_double(p.death) << ','
        << format_double(bp[0]) << ',' << format_double(bp[1]) << ',';
    for (std::size_t k = 0; k < p.death_vertices.size(); ++k) {
      if (k) out << ';';
      out << format_double(p.death_vertices[k][0]) << ':' << format_double(p.death_vertices[k][1]);
    }
    out << '\n';
  }
}

PersistenceDiagram read_diagram_csv(const fs::path& path) {
  auto in = open_in(path);
  PersistenceDiagram dg;
  dg.source = path.string();
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty diagram file");
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line, ',');
    if (fields.size() < 3) throw std::runtime_error(path.string() + ": malformed diagram row");
    PersistencePair p;
    p.degree = std::stoi(fields[0]);
    p.birth = parse_double(fields[1]);
    p.death = parse_double(fields[2]);
    p.death_cell = std::isinf(p.death) ? -1 : 0;
    if (fields.size() >= 5 && !fields[3].empty())
      p.birth_vertices.push_back({parse_double(fields[3]), parse_double(fields[4]), 0.0});
    if (fields.size() >= 6 && !fields[5].empty()) {
      for (const auto& vert : split(fields[5], ';')) {
        const auto xy = split(vert, ':');
        if (xy.size() != 2) throw std::runtime_error(path.string() + ": malformed death vertex");
        p.death_vertices.push_back({parse_double(xy[0]), parse_double(xy[1]), 0.0});
      }
    }
    dg.pairs.push_back(std::move(p));
  }
  return dg;
}

fs::path sidecar_path(const fs::path& vector_path) {
  fs::path p = vector_path;
  p += ".json";
  return p;
}

void write_vector_csv(const std::vector<double>& values, const PIParams& params,
                      const fs::path& path) {
  auto out = open_out(path);
  for (double v : values) out << format_double(v) << '\n';
  auto side = open_out(sidecar_path(path));
  side << params_to_json(params).dump(2) << '\n';
}

PersistenceImageVector read_vector_csv(const fs::path& path) {
  auto in = open_in(path);
  PersistenceImageVector vec;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    vec.values.push_back(parse_double(line));
  }
  auto side = open_in(sidecar_path(path));
  json j;
  side >> j;
  vec.params = params_from_json(j);
  if (vec.values.size() != static_cast<std::size_t>(vec.params.grid.size()))
    throw std::runtime_error(path.string() + ": vector length does not match its grid sidecar");
  return vec;
}

void write_model_json(const TrainedLinearModel& model, const fs::path& path) {
  json j;
  j["task"] = model.task == Task::Regression ? "regression" : "classification";
  j["penalty"] = {{"kind", model.penalty.kind == PenaltyKind::L1 ? "l1" : "l2"},
                  {"lambda", model.penalty.lambda}};
  j["b"] = model.b;
  j["feature_layout"] = {{"pi_dim", model.layout.pi_dim},
                         {"extra_features", model.layout.extra_features}};
  j["w"] = std::vector<double>(model.w.data(), model.w.data() + model.w.size());
  j["diagnostics"] = {{"final_loss", model.final_loss},
                      {"iterations", model.iterations},
                      {"converged", model.converged},
                      {"standardized", model.standardized}};
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

TrainedLinearModel read_model_json(const fs::path& path) {
  auto in = open_in(path);
  json j;
  in >> j;
  TrainedLinearModel model;
  model.task = j.at("task") == "regression" ? Task::Regression : Task::Classification;
  model.penalty.kind = j.at("penalty").at("kind") == "l1" ? PenaltyKind::L1 : PenaltyKind::L2;
  model.penalty.lambda = j.at("penalty").at("lambda");
  model.b = j.at("b");
  model.layout.pi_dim = j.at("feature_layout").at("pi_dim");
  model.layout.extra_features =
      j.at("feature_layout").at("extra_features").get<std::vector<std::string>>();
  const auto wvec = j.at("w").get<std::vector<double>>();
  model.w = Eigen::Map<const Eigen::VectorXd>(wvec.data(), static_cast<Eigen::Index>(wvec.size()));
  if (j.contains("diagnostics")) {
    model.final_loss = j["diagnostics"].value("final_loss", 0.0);
    model.iterations = j["diagnostics"].value("iterations", 0);
    model.converged = j["diagnostics"].value("converged", true);
    model.standardized = j["diagnostics"].value("standardized", false);
  }
  return model;
}

void write_dataset(const Dataset& ds, const fs::path& csv_path) {
  auto out = open_out(csv_path);
  for (Eigen::Index i = 0; i < ds.inputs.rows(); ++i) {
    for (Eigen::Index jcol = 0; jcol < ds.inputs.cols(); ++jcol) {
      if (jcol) out << ',';
      out << format_double(ds.inputs(i, jcol));
    }
    out << '\n';
  }
  json j;
  j["pi_dim"] = ds.layout.pi_dim;
  j["extra_features"] = ds.layout.extra_features;
  j["targets"] = std::vector<double>(ds.targets.data(), ds.targets.data() + ds.targets.size());
  auto side = open_out(sidecar_path(csv_path));
  side << j.dump(2) << '\n';
}

Dataset read_dataset(const fs::path& csv_path) {
  auto in = open_in(csv_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line, ',');
    std::vector<double> row(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) row[k] = parse_double(fields[k]);
    if (!rows.empty() && rows[0].size() != row.size())
      throw std::runtime_error(csv_path.string() + ": ragged matrix rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(csv_path.string() + ": empty dataset");

  auto side = open_in(sidecar_path(csv_path));
  json j;
  side >> j;
  Dataset ds;
  ds.inputs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      ds.inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  const auto targets = j.at("targets").get<std::vector<double>>();
  if (targets.size() != rows.size())
    throw std::runtime_error(csv_path.string() + ": target count does not match matrix rows");
  ds.targets = Eigen::Map<const Eigen::VectorXd>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  ds.layout.pi_dim = j.at("pi_dim");
  ds.layout.extra_features = j.at("extra_features").get<std::vector<std::string>>();
  return ds;
}

namespace {

json cell_json(int index, const PIGrid& grid, double value) {
  const int ib = index % grid.nb;
  const int id = index / grid.nb;
  return json{{"index", index},
              {"birth_index", ib},
              {"death_index", id},
              {"b_lo", grid.b_min + ib * grid.cell_width()},
              {"b_hi", grid.b_min + (ib + 1) * grid.cell_width()},
              {"d_lo", grid.d_min + id * grid.cell_height()},
              {"d_hi", grid.d_min + (id + 1) * grid.cell_height()},
              {"value", value}};
}

json pair_json(const PersistencePair& p) {
  json j;
  j["degree"] = p.degree;
  j["birth"] = p.birth;
  j["death"] = p.death;
  const auto bp = p.birth_pos();
  j["birth_pos"] = {bp[0], bp[1]};
  json dv = json::array();
  for (const auto& v : p.death_vertices) dv.push_back({v[0], v[1]});
  j["death_vertices"] = dv;
  return j;
}

}  // namespace

void write_region_json(const SignificantRegion& region, const DualDiagram& dd,
                       const fs::path& path) {
  json j;
  j["threshold"] = region.threshold;
  j["fraction"] = region.fraction;
  j["params"] = params_to_json(region.params);
  json pos = json::array(), neg = json::array();
  for (int c : region.positive_cells) pos.push_back(cell_json(c, region.params.grid, dd.values[c]));
  for (int c : region.negative_cells) neg.push_back(cell_json(c, region.params.grid, dd.values[c]));
  j["positive_cells"] = pos;
  j["negative_cells"] = neg;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_selected_pairs_json(const SelectedPairs& pairs, const fs::path& path) {
  json j;
  json pos = json::array(), neg = json::array();
  for (const auto& p : pairs.positive) pos.push_back(pair_json(p));
  for (const auto& p : pairs.negative) neg.push_back(pair_json(p));
  j["positive"] = pos;
  j["negative"] = neg;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash " + path.string());
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
    if (!in) break;
  }
  return h;
}

void write_manifest(const fs::path& directory, const std::string& command,
                    const std::string& params_json, std::uint64_t seed,
                    const std::vector<ManifestInput>& inputs,
                    const std::vector<std::string>& outputs) {
  json j;
  j["tool"] = "pdlearn";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["params"] = json::parse(params_json.empty() ? "{}" : params_json);
  j["seed"] = seed;
  json ins = json::array();
  for (const auto& input : inputs) {
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(input.hash));
    ins.push_back({{"path", input.path}, {"fnv1a64", hex}});
  }
  j["inputs"] = ins;
  j["outputs"] = outputs;
  auto out = open_out(directory / "manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace pdlearn::io
