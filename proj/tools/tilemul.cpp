// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: conversion between Matrix Market and the tiled
// binary format, matrix squaring, oracle comparison, matrix statistics,
// approach advice, and benchmarking.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tilemul/analytics.hpp"
#include "tilemul/errors.hpp"
#include "tilemul/kernels.hpp"
#include "tilemul/mm_io.hpp"
#include "tilemul/oracle.hpp"
#include "tilemul/report.hpp"
#include "tilemul/threading.hpp"
#include "tilemul/tile_format.hpp"
#include "tilemul/tiled_io.hpp"

namespace {

using namespace tilemul;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitDimension = 4;
constexpr int kExitPrecision = 5;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool has_tspz_magic(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::string_view(magic, 4) == "TSPZ";
}

// Loads either format; mtx_kind picks the tiling precision for Matrix
// Market inputs (.tspz files keep their stored kind).
TiledMatrix load_matrix(const std::filesystem::path& path,
                        ElementKind mtx_kind = ElementKind::Fp16Stored) {
  if (!std::filesystem::exists(path)) {
    throw IoError("input file not found: " + path.string());
  }
  if (has_tspz_magic(path)) return read_tiled_binary(path);
  return from_element_coo(read_matrix_market(path), mtx_kind);
}

double lower_median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

int cmd_convert(const std::string& input, const std::string& output,
                const std::string& precision) {
  const ElementCoo coo = read_matrix_market(input);
  const ElementKind kind = precision == "fp32" ? ElementKind::Fp32Stored
                                               : ElementKind::Fp16Stored;
  const TiledMatrix m = from_element_coo(coo, kind);
  write_tiled_binary(m, std::filesystem::path(output));
  std::cout << "wrote " << output << ": " << m.tiles.size() << " tiles, "
            << m.elements.size() << " elements, " << m.rows << "x" << m.cols
            << " " << (kind == ElementKind::Fp16Stored ? "fp16" : "fp32")
            << "\n";
  return kExitOk;
}

int cmd_square(const std::string& input, const std::string& output,
               bool pairing, unsigned threads, const std::string& report_path) {
  const std::filesystem::path in_path(input);
  const TiledMatrix A = load_matrix(in_path);

  SquareOptions opts;
  opts.pairing = pairing;
  opts.threads = threads;
  const SquareResult res = spgemm_square(A, opts);

  write_tiled_binary(res.output, std::filesystem::path(output));
  std::cout << "squared " << in_path.filename().string() << ": nnzC="
            << res.output.elements.size() << " tiles="
            << res.output.tiles.size() << " total=" << res.timing.total
            << "s threads=" << res.threads_used << "\n";

  if (!report_path.empty()) {
    RunReport report;
    report.matrix_name = in_path.stem().string();
    report.dims = A.rows;
    report.nnz_a = A.elements.size();
    report.nnz_c = res.output.elements.size();
    report.timing = res.timing;
    report.memory = res.memory;
    const ElementCoo coo_a = to_element_coo(A);
    report.smape_vs_fp64 =
        smape(to_element_coo(res.output), dense_spgemm_fp64(coo_a, coo_a));
    report.thread_count = res.threads_used;
    report.seed = 0;
    std::ofstream out(report_path);
    if (!out) throw IoError("cannot open " + report_path + " for writing");
    out << to_json(report) << "\n";
  }
  return kExitOk;
}

int cmd_compare(const std::string& input, const std::string& mode) {
  const ElementCoo coo = read_matrix_market(input);
  const TiledMatrix A = from_element_coo(coo, ElementKind::Fp16Stored);
  const SquareResult res = spgemm_square(A);
  const ElementCoo got = to_element_coo(res.output);
  const ElementCoo ref = mode == "mixed"
                             ? dense_spgemm_mixed_ordered(coo, coo)
                             : dense_spgemm_fp64(coo, coo);
  std::cout << "SMAPE vs " << mode << " oracle: " << smape(got, ref) << " %\n";
  return kExitOk;
}

int cmd_stats(const std::string& input, bool as_json) {
  // Lossless fp32 tiling: the statistics describe the matrix itself, so
  // entries must not vanish through binary16 underflow.
  const TiledMatrix A = load_matrix(input, ElementKind::Fp32Stored);
  const MatrixStats s = compute_stats(A, /*square_products=*/true);
  const std::string name = std::filesystem::path(input).stem().string();
  if (as_json) {
    std::cout << stats_to_json(name, s) << "\n";
  } else {
    std::cout << stats_csv_header() << "\n" << stats_csv_row(name, s) << "\n";
  }
  return kExitOk;
}

int cmd_advise(const std::string& input, bool as_json, bool raw_ratio) {
  const TiledMatrix A = load_matrix(input, ElementKind::Fp32Stored);
  const MatrixStats s = compute_stats(A, /*square_products=*/true);
  const Advice a = advise(s, raw_ratio);
  if (as_json) {
    std::cout << advice_to_json(a) << "\n";
    return kExitOk;
  }
  std::cout << "approach        recommended  condition\n";
  for (const auto& e : a.entries) {
    std::cout << e.approach << std::string(16 - std::min<std::size_t>(
                                               16, e.approach.size()), ' ')
              << (e.recommended ? "yes" : "no ") << "          "
              << e.condition << "\n";
  }
  return kExitOk;
}

int cmd_bench(const std::string& input, unsigned iters, unsigned threads,
              const std::string& csv_path) {
  const std::filesystem::path in_path(input);
  const TiledMatrix A = load_matrix(in_path);

  SquareOptions opts;
  opts.threads = threads;

  spgemm_square(A, opts);  // warm-up, untimed

  std::vector<PhaseTiming> timings;
  MemoryReport memory;
  std::uint64_t hash = 0;
  unsigned used = 1;
  for (unsigned i = 0; i < iters; ++i) {
    const SquareResult res = spgemm_square(A, opts);
    timings.push_back(res.timing);
    memory = res.memory;
    hash = fnv1a(serialize_tiled(res.output));
    used = res.threads_used;
  }

  RunReport report;
  report.matrix_name = in_path.stem().string();
  report.dims = A.rows;
  report.nnz_a = A.elements.size();
  report.thread_count = used;
  report.memory = memory;
  const auto pick = [&](double PhaseTiming::* field) {
    std::vector<double> v;
    v.reserve(timings.size());
    for (const auto& t : timings) v.push_back(t.*field);
    return lower_median(std::move(v));
  };
  report.timing.task_list = pick(&PhaseTiming::task_list);
  report.timing.sort = pick(&PhaseTiming::sort);
  report.timing.counting = pick(&PhaseTiming::counting);
  report.timing.multiply = pick(&PhaseTiming::multiply);
  report.timing.compaction = pick(&PhaseTiming::compaction);
  report.timing.total = pick(&PhaseTiming::total);

  const std::string row = csv_row(report, iters, hash);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot open " + csv_path + " for writing");
    out << csv_header() << "\n" << row << "\n";
  }
  std::cout << csv_header() << "\n" << row << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bitmap-tiled sparse matrix-matrix multiplication"};
  app.require_subcommand(1);

  std::string input, output, report_path, csv_path;
  std::string precision = "fp16";
  std::string pairing = "on";
  std::string mode = "fp64";
  unsigned threads = 0;
  unsigned iters = 1;
  bool as_json = false;
  bool raw_ratio = false;

  auto* convert = app.add_subcommand("convert", "Matrix Market -> tiled binary");
  convert->add_option("--input", input, "Matrix Market file")->required();
  convert->add_option("--output", output, "tiled binary file")->required();
  convert->add_option("--precision", precision, "element precision")
      ->check(CLI::IsMember({"fp16", "fp32"}));

  auto* square = app.add_subcommand("square", "compute A*A");
  square->add_option("--input", input, "input matrix (.tspz or .mtx)")
      ->required();
  square->add_option("--output", output, "output tiled binary")->required();
  square->add_option("--pairing", pairing, "16x16 diagonal pairing")
      ->check(CLI::IsMember({"on", "off"}));
  square->add_option("--threads", threads, "worker count (0 = auto)");
  square->add_option("--report", report_path, "write run report JSON");

  auto* compare = app.add_subcommand("compare", "SMAPE of A*A vs an oracle");
  compare->add_option("--input", input, "Matrix Market file")->required();
  compare->add_option("--mode", mode, "oracle precision")
      ->check(CLI::IsMember({"fp64", "mixed"}));

  auto* stats = app.add_subcommand("stats", "matrix statistics for A*A");
  stats->add_option("--input", input, "input matrix")->required();
  stats->add_flag("--json", as_json, "JSON output");

  auto* advise_cmd = app.add_subcommand("advise", "approach selection advice");
  advise_cmd->add_option("--input", input, "input matrix")->required();
  advise_cmd->add_flag("--json", as_json, "JSON output");
  advise_cmd->add_flag("--raw-tile-ratio", raw_ratio,
                       "use pre-filter tile pairs in the ratio conditions");

  auto* bench = app.add_subcommand("bench", "timed A*A runs");
  bench->add_option("--input", input, "input matrix")->required();
  bench->add_option("--iters", iters, "timed iterations")
      ->check(CLI::PositiveNumber);
  bench->add_option("--threads", threads, "worker count (0 = auto)");
  bench->add_option("--csv", csv_path, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitOther;
  }

  try {
    if (*convert) return cmd_convert(input, output, precision);
    if (*square) {
      return cmd_square(input, output, pairing == "on", threads, report_path);
    }
    if (*compare) return cmd_compare(input, mode);
    if (*stats) return cmd_stats(input, as_json);
    if (*advise_cmd) return cmd_advise(input, as_json, raw_ratio);
    if (*bench) return cmd_bench(input, iters, threads, csv_path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvariantError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const PrecisionError& e) {
    std::cerr << "precision error: " << e.what() << "\n";
    return kExitPrecision;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
