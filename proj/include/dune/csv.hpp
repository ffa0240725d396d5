#pragma once

#include <string>

#include "dune/sweep.hpp"
#include "dune/trainer.hpp"

namespace dune {

// CSV schemas are fixed; rows are formatted with pinned printf precision so
// identical runs emit identical bytes (the seconds column is wall-clock and
// is the one exception).

inline constexpr const char* kMetricsCsvHeader =
    "epoch,train_loss,clean_acc,noisy_acc,mean_width,seconds";
inline constexpr const char* kSweepCsvHeader =
    "method,axis,value,hs,final_noisy_acc";

std::string metrics_csv_row(const MetricsRecord& record);
std::string sweep_csv_row(const SweepRow& row);

}  // namespace dune
