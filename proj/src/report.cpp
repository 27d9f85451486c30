// SPDX-License-Identifier: Apache-2.0
#include "tilemul/report.hpp"

#include <sstream>

#include "json.hpp"

namespace tilemul {

std::string to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["matrixName"] = r.matrix_name;
  j["dims"] = r.dims;
  j["nnzA"] = r.nnz_a;
  j["nnzC"] = r.nnz_c;
  j["timing"] = {
      {"taskList", r.timing.task_list}, {"sort", r.timing.sort},
      {"counting", r.timing.counting},  {"multiply", r.timing.multiply},
      {"compaction", r.timing.compaction}, {"total", r.timing.total},
  };
  j["memory"] = {
      {"inputTilesBytes", r.memory.input_tiles_bytes},
      {"inputElementsBytes", r.memory.input_elements_bytes},
      {"taskListBytes", r.memory.task_list_bytes},
      {"countingBytes", r.memory.counting_bytes},
      {"preCompactionBytes", r.memory.pre_compaction_bytes},
      {"outputBytes", r.memory.output_bytes},
      {"peakBytes", r.memory.peak_bytes},
  };
  j["smapeVsFp64"] = r.smape_vs_fp64;
  j["threadCount"] = r.thread_count;
  j["seed"] = r.seed;
  return j.dump(2);
}

std::string csv_header() {
  return "matrixName,iters,threads,taskList,sort,counting,multiply,"
         "compaction,total,peakBytes,outputHash";
}

std::string csv_row(const RunReport& r, unsigned iters,
                    std::uint64_t output_hash) {
  std::ostringstream ss;
  ss.precision(9);
  ss << r.matrix_name << ',' << iters << ',' << r.thread_count << ','
     << r.timing.task_list << ',' << r.timing.sort << ',' << r.timing.counting
     << ',' << r.timing.multiply << ',' << r.timing.compaction << ','
     << r.timing.total << ',' << r.memory.peak_bytes << ',' << output_hash;
  return ss.str();
}

}  // namespace tilemul
