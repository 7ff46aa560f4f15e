#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <span>
#include <string>

#include <json.hpp>

#include "kfp/entropy.hpp"
#include "kfp/fast_diffusion.hpp"
#include "kfp/positivity.hpp"
#include "kfp/solver.hpp"

namespace kfp {

using json = nlohmann::json;

inline std::ofstream open_artifact(const std::string& path, std::uint64_t config_hash)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open artifact for writing: " + path);
    out << "# config_hash=0x" << std::hex << config_hash << std::dec << "\n";
    out.precision(17);
    return out;
}

inline void write_diagnostics_csv(std::span<const StepDiagnostics> rows, const std::string& path,
                                  std::uint64_t config_hash)
{
    auto out = open_artifact(path, config_hash);
    out << "step,time,mass,min_h,max_h,l2_dm_dist_to_M0,entropy_Hbeta_vs_1,dissipation,min_x_mean_h\n";
    for (const auto& d : rows)
        out << d.step << ',' << d.time << ',' << d.mass << ',' << d.min_h << ',' << d.max_h << ','
            << d.l2_dm_dist_to_M0 << ',' << d.entropy_Hbeta_vs_1 << ',' << d.dissipation << ','
            << d.min_x_mean_h << '\n';
}

/// one per-snapshot functional row of the entropy report series
struct EntropyReportRow {
    double time = 0;
    double H_beta_vs_rho = 0;  // against the macroscopic companion when available
    double H_beta_vs_1 = 0;
    double dissipation = 0;
    double E_eps = 0;
    double cross_term = 0;
    double l2_dm = 0;
    double lambda_t = 0;
};

inline void write_entropy_csv(std::span<const EntropyReportRow> rows, const std::string& path,
                              std::uint64_t config_hash)
{
    auto out = open_artifact(path, config_hash);
    out << "time,H_beta_vs_rho,H_beta_vs_1,dissipation,E_eps,cross_term,l2_dm,lambda_t\n";
    for (const auto& r : rows)
        out << r.time << ',' << r.H_beta_vs_rho << ',' << r.H_beta_vs_1 << ',' << r.dissipation << ','
            << r.E_eps << ',' << r.cross_term << ',' << r.l2_dm << ',' << r.lambda_t << '\n';
}

inline void write_fd_diagnostics_csv(std::span<const FdDiagnostics> rows, const std::string& path,
                                     std::uint64_t config_hash)
{
    auto out = open_artifact(path, config_hash);
    out << "step,time,mass,min_rho,max_rho,grad_sup\n";
    for (const auto& d : rows)
        out << d.step << ',' << d.time << ',' << d.mass << ',' << d.min_rho << ',' << d.max_rho << ','
            << d.grad_sup << '\n';
}

inline void write_density_csv(const DensityField& rho, double time, const std::string& path,
                              std::uint64_t config_hash)
{
    auto out = open_artifact(path, config_hash);
    out << "# time=" << time << "\n";
    out << "x,rho\n";
    for (int i = 0; i < rho.size(); ++i)
        out << rho.grid->nodes[static_cast<std::size_t>(i)] << ',' << rho[i] << '\n';
}

inline json to_json(const BarrierReport& r)
{
    return json{{"pass", r.pass},
                {"worst_margin", r.worst_margin},
                {"points_checked", r.points_checked},
                {"horizon", r.horizon},
                {"drift_constant", r.drift_constant},
                {"tolerance", r.tolerance}};
}

inline json to_json(const InitialLayerReport& r)
{
    return json{{"pass", r.pass},
                {"worst_excess", r.worst_excess},
                {"oscillation", r.oscillation},
                {"points_checked", r.points_checked},
                {"window", r.window}};
}

inline json to_json(const ChainReport& r)
{
    return json{{"pass", r.pass},
                {"time_consistent", r.time_consistent},
                {"velocity_consistent", r.velocity_consistent},
                {"tau2_in_range", r.tau2_in_range},
                {"departure_ok", r.departure_ok},
                {"start_in_ball", r.start_in_ball},
                {"endpoint_error", r.endpoint_error},
                {"velocity_error", r.velocity_error},
                {"max_departure", r.max_departure},
                {"departure_closed_form", r.departure_closed_form},
                {"departure_bound", r.departure_bound},
                {"detail", r.detail}};
}

inline json to_json(const TailFit& f, double minorant_margin)
{
    return json{{"eta1", f.eta1}, {"eta2", f.eta2}, {"minorant_worst_margin", minorant_margin}};
}

inline void write_json(const json& j, const std::string& path, std::uint64_t config_hash)
{
    json wrapped = j;
    std::ostringstream hex;
    hex << "0x" << std::hex << config_hash;
    wrapped["config_hash"] = hex.str();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open artifact for writing: " + path);
    out << wrapped.dump(2) << '\n';
}

}  // namespace kfp
