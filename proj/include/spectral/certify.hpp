#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectral/homotopy.hpp"

namespace spectral {

constexpr const char* kToolVersion = "1.0.0";

struct PipelineOptions {
    double delta0 = 0.01;
    std::optional<ComplexBox> t;
    std::optional<Interval> J;
    bool two_pass = false;
    double t_margin = 1.0;
    double two_pass_margin = 0.05;
    bool self_adjoint_path = true;
    std::optional<int> invariance_dim;
};

struct PassSummary {
    ComplexBox t;
    Interval spectral_upper, spectral_lower;
};

struct SectorRun {
    SectorCertificate cert;
    std::vector<PassSummary> passes;
};

// Default J and t for a run: [-delta0, lambda_max] with t = -(lambda_max +
// margin) when the symbol is unbounded below, the mirror image otherwise.
JordanDomain default_domain(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, double delta0);
ComplexBox default_shift(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, double margin);

SectorRun certify_sector(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, const Sector& sector,
                         const PipelineOptions& opt);

struct SolutionInput {
    FourierSeq U0;
    std::optional<Interval> r0;
    std::optional<int> invariance_dim;                 // whole run
    std::map<std::string, int> invariance_per_sector;  // overrides per sector
    std::vector<std::string> sectors;
    std::map<std::string, std::string> equivalent_sectors;  // e.g. sc -> cs
};
SolutionInput read_solution(const std::string& path);

struct SeedSpec {
    std::string kind = "gaussian";  // gaussian, sech2, file
    double amplitude = 1.0;
    double width = 1.0;
    std::string file;
};
FourierSeq make_seed(const SeedSpec& s, const GridSpec& grid, const Sector& sector);

struct RunConfig {
    std::string mode = "certify";  // certify, gershgorin-only, newton, essential-spectrum
    std::string model_file;
    std::string solution_file;
    std::optional<int> N;
    std::optional<double> d;
    std::optional<int> m;
    std::string sector = "c";  // newton mode
    SeedSpec seed;
    NewtonOptions newton;
    PipelineOptions pipeline;
    std::vector<std::string> sectors;
    std::string output = "certificate.json";
    std::optional<std::string> plot_output;
    std::string base_dir = ".";
};

RunConfig read_run_config(const std::string& path);

enum ExitCode {
    kExitOk = 0,
    kExitUsage = 1,
    kExitIo = 2,
    kExitCondition = 3,
    kExitSingular = 4,
    kExitCertification = 5,
};
int exit_code_for(const std::string& error_kind);

struct RunResult {
    int exit_code = kExitOk;
    nlohmann::json document;  // what was written to the output path
    std::string message;
    double wall_seconds = 0.0;
};

// Runs the configured mode and writes the outputs. Never throws for
// library errors; they become a failure report and a nonzero exit code.
RunResult run(const RunConfig& cfg);

// Canonical text: sorted keys, fixed indentation, trailing newline.
std::string canonical_dump(const nlohmann::json& j);
std::string plot_csv(const std::vector<SectorRun>& runs);

}  // namespace spectral
