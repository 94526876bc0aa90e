#pragma once

#include <string>

#include "ptrans/estimate.hpp"

namespace ptrans {

/// CSV with header k,re,im; one row per moment. The noise level is not part of
/// the format, so read_moments_csv returns sigma = 0.
void write_moments_csv(const std::string& path, const MomentSequence& moments);
MomentSequence read_moments_csv(const std::string& path);

/// JSON {"nodes":[{"re":..,"im":..},...],"weights":[{"re":..,"im":..},...]}.
void write_measure_json(const std::string& path, const ComplexMeasure& measure);
ComplexMeasure read_measure_json(const std::string& path);

/// First line "# x_min x_max y_min y_max nx ny", then ny rows of nx
/// comma-separated values, row iy holding y = y_min + iy hy (ascending).
/// Masked cells are written as 0; the mask itself is not part of the format.
void write_grid_csv(const std::string& path, const GridField& field);
GridField read_grid_csv(const std::string& path);

/// CSV with header r,re_pole,im_pole,re_res,im_res; r is 1-based.
void write_pool_csv(const std::string& path, const PseudosamplePool& pool);
PseudosamplePool read_pool_csv(const std::string& path);

/// CSV with header re_pole,im_pole,re_res,im_res.
void write_solution_csv(const std::string& path, const PencilSolution& solution);
PencilSolution read_solution_csv(const std::string& path);

/// JSON {"p_hat":..,"nodes":[..],"weights":[..],
///       "clusters":[{"candidate":{..},"fraction":..,"size":..},...]}.
void write_estimation_json(const std::string& path, const EstimationResult& result);

}  // namespace ptrans
