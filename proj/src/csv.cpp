#include "dune/csv.hpp"

#include <cstdio>

namespace dune {

std::string metrics_csv_row(const MetricsRecord& r) {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), "%d,%.6f,%.6f,%.6f,%.6f,%.3f",
                  r.epoch, r.train_loss, r.clean_acc, r.noisy_acc,
                  r.mean_width, r.seconds);
    return buffer;
}

std::string sweep_csv_row(const SweepRow& row) {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), "%s,%s,%.6f,%.6f,%.6f",
                  method_name(row.method).c_str(),
                  axis_name(row.axis).c_str(), row.value, row.hs,
                  row.final_noisy_acc);
    return buffer;
}

}  // namespace dune
