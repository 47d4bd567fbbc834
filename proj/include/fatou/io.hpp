#pragma once

#include <string>

#include "fatou/extension.hpp"
#include "fatou/fractal.hpp"
#include "fatou/grid.hpp"
#include "fatou/lipschitz.hpp"

namespace fatou {

/// "FLGF", u32 version, u32 dim, u32 levels, f64 extent, then little-endian f64 samples.
void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(const std::string& path);

/// Header `index,x[,y],value`, one row per sample.
void write_grid_function_csv(const std::string& path, const GridFunction& f);
/// Needs the grid since extent is not recoverable from the rows.
GridFunction read_grid_function_csv(const std::string& path, const Grid& grid);

/// "FLHF", u32 version, grid header, u32 K, K heights, then K row-major slices.
void write_half_space_field(const std::string& path, const HalfSpaceField& u);
HalfSpaceField read_half_space_field(const std::string& path);

/// One coordinate tuple per line, no header.
void write_point_set_csv(const std::string& path, const PointSet& set);
PointSet read_point_set_csv(const std::string& path, const Grid& grid);

/// FLGF payload for phi followed by an "FLLG" record (f64 M, i32 smooth_class).
void write_lipschitz_graph(const std::string& path, const LipschitzGraph& graph);
LipschitzGraph read_lipschitz_graph(const std::string& path);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

} // namespace fatou
