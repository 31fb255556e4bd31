#pragma once

#include <filesystem>
#include <string>

#include "bfdc/lemma.hpp"
#include "bfdc/regions.hpp"
#include "bfdc/solver.hpp"

namespace bfdc {

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// interfaces.csv: t,left_pos,right_pos,sub_measure,super_measure,
// degen_measure per sample; absent positions are empty fields.
void write_interfaces_csv(const InterfaceTrack& track,
                          const std::filesystem::path& path);
InterfaceTrack read_interfaces_csv(const std::filesystem::path& path);

// states.csv: t,x,u,ux,label for every node of every sample.
void write_states_csv(const Trajectory& traj, const FluxSpec& flux,
                      double delta, const std::filesystem::path& path);

// fronts.csv: t,left_front,right_front.
void write_fronts_csv(const FrontTrack& track,
                      const std::filesystem::path& path);
FrontTrack read_fronts_csv(const std::filesystem::path& path);

}  // namespace bfdc
