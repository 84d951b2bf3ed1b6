#pragma once

#include <cstdint>
#include <string>

#include "bek/collision.hpp"
#include "bek/hydro.hpp"
#include "bek/slab.hpp"

namespace bek {

uint64_t fnv1a(const std::string& s);

std::string operator_meta_json(const CollisionOperator& op,
                               uint64_t config_hash);
std::string spectrum_json(const SpectrumReport& rep, uint64_t grid_hash,
                          uint64_t config_hash);
std::string constants_json(const HydroBasis& basis, const DecayConstants& c,
                           const SpectrumReport& rep, double gamma_extrap,
                           double gamma_oracle, uint64_t grid_hash,
                           uint64_t config_hash);
std::string diagnostics_json(const MilneSolution& sol, const DecayReport& rep,
                             uint64_t grid_hash, uint64_t config_hash);

void write_text(const std::string& path, const std::string& content);
void write_solution_csv(const std::string& path, const MilneSolution& sol);
void write_field_csv(const std::string& path, const MomentumGrid& grid,
                     const MilneSolution& sol);
void write_field_bin(const std::string& path, const MilneSolution& sol);

}  // namespace bek
