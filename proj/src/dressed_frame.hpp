// dressed_frame.hpp: Secular RK4 integrator in the eigenframe of each static segment

#pragma once

#include "emsim/dynamics.hpp"

#include <vector>

namespace emsim::detail {

std::vector<double> integration_edges(const ControlledHamiltonian& h,
                                      const std::vector<double>& t_grid);
void check_trace(const Matrix& rho, double t, Trajectory& traj);

Trajectory evolve_dressed(const ControlledHamiltonian& h, const LindbladSpec& diss,
                          const Matrix& rho0, const std::vector<double>& t_grid,
                          const IntegratorConfig& cfg, const Observer& observer);

}  // namespace emsim::detail
