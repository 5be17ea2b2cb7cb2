#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "lnu/harmonic.hpp"
#include "lnu/nonuniformity.hpp"
#include "lnu/ranking.hpp"
#include "lnu/theory_checks.hpp"
#include "lnu/wgnn.hpp"

namespace lnu {

// Text renderings of the artifacts the tools emit. CSV output has a header
// row, LF line endings and floats with 6 significant digits; JSON output is
// a single pretty-printed document.

std::string signal_csv(const GraphSignal& f);                  // node_id,value
std::string distribution_csv(const DistributionTable& table);  // node,p0,...,p{k-1}
DistributionTable read_distribution_csv(const std::filesystem::path& path);
std::string ranking_csv(const Ranking& ranking);               // rank,node,key1,key2
std::string curve_csv(std::span<const CurvePoint> curve);      // alpha,accuracy
/// alpha,m1_accuracy,m2_accuracy; both curves must share the alpha grid.
std::string curves_csv(std::span<const CurvePoint> m1, std::span<const CurvePoint> m2);
std::string grid_csv(std::span<const GridRow> rows);           // eta0,eta1,eta2,val_acc,test_acc

std::string boundary_report_json(const BoundaryReport& report);
std::string bottleneck_certificate_json(const BottleneckCertificate& cert);
std::string sublevel_profile_json(const SublevelProfile& profile);
std::string wgnn_config_json(const WgnnConfig& cfg);
std::string augmented_split_json(const AugmentedSplit& aug);
std::string run_result_json(const RunResult& result);

}  // namespace lnu
