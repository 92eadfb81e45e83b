#include "dlog/bench.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dlog {

const char* to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::kDic: return "dic";
    case Algorithm::kDicParallel: return "dic-parallel";
    case Algorithm::kIc: return "ic";
    case Algorithm::kBsgs: return "bsgs";
    case Algorithm::kRho: return "rho";
    case Algorithm::kPh: return "ph";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dic") return Algorithm::kDic;
  if (name == "dic-parallel") return Algorithm::kDicParallel;
  if (name == "ic") return Algorithm::kIc;
  if (name == "bsgs") return Algorithm::kBsgs;
  if (name == "rho") return Algorithm::kRho;
  if (name == "ph") return Algorithm::kPh;
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

DlpInstance gen_instance(unsigned bits, std::uint64_t seed) {
  if (bits < 12) throw std::invalid_argument("gen_instance: bits must be >= 12");
  Rng rng(seed);
  DlpInstance inst;
  inst.p = random_prime(bits, rng);
  Factorization fact = factor_integer(inst.p - 1);
  inst.g = find_generator(inst.p, fact);
  Int x = rng.range(1, inst.p - 2);
  inst.b = mod_pow(inst.g, x, inst.p);
  inst.expected_x = x;
  return inst;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

BenchRecord run_trial(const BenchConfig& config, unsigned bits, double multiplier, Algorithm alg,
                      std::uint32_t trial) {
  BenchRecord rec;
  rec.algorithm = to_string(alg);
  rec.bits = bits;
  rec.multiplier = multiplier;
  rec.trial = trial;
  rec.seed = mix_seed(config.seed, {bits, std::bit_cast<std::uint64_t>(multiplier),
                                    static_cast<std::uint64_t>(alg), trial});

  DlpInstance inst = gen_instance(bits, mix_seed(rec.seed, {0}));
  rec.p = inst.p;
  rec.g = inst.g;
  rec.b = inst.b;
  rec.x_expected = *inst.expected_x;

  BoundFormula formula = BoundFormula::kSqrtHalf;
  if (auto it = config.bound_formula.find(alg); it != config.bound_formula.end())
    formula = it->second;

  Rng rng_a(mix_seed(rec.seed, {1}));
  Rng rng_b(mix_seed(rec.seed, {2}));

  SolveResult res;
  const auto start = std::chrono::steady_clock::now();
  switch (alg) {
    case Algorithm::kDic:
    case Algorithm::kDicParallel: {
      std::uint64_t bound = smoothness_bound(inst.p, {formula, multiplier});
      res = solve_double_index_calculus(inst, bound, alg == Algorithm::kDicParallel, rng_a, rng_b,
                                        config.budgets);
      break;
    }
    case Algorithm::kIc: {
      std::uint64_t bound = smoothness_bound(inst.p, {formula, multiplier});
      res = solve_index_calculus(inst, bound, rng_a, config.budgets);
      break;
    }
    case Algorithm::kBsgs:
      res = solve_bsgs(inst, {}, config.budgets);
      break;
    case Algorithm::kRho:
      res = solve_pollard_rho(inst, rng_a, config.budgets);
      break;
    case Algorithm::kPh:
      res = solve_pohlig_hellman(inst, config.budgets);
      break;
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  rec.success = res.ok() && res.x == rec.x_expected;
  rec.x_found = res.ok() ? res.x : Int(0);
  rec.elapsed_ms = static_cast<std::uint64_t>(
      (std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count() + 500'000) /
      1'000'000);
  rec.candidates_tested = res.counters.candidates_tested;
  rec.smooth_found = res.counters.smooth_found;
  rec.rounds = res.counters.rounds;
  return rec;
}

}  // namespace

std::vector<BenchRecord> run_sweep(const BenchConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  for (unsigned bits : config.bits_list)
    if (bits < 12) throw std::invalid_argument("run_sweep: bits must be >= 12");
  for (double m : config.multipliers)
    if (m <= 0) throw std::invalid_argument("run_sweep: multipliers must be > 0");

  struct Cell {
    unsigned bits;
    double multiplier;
    Algorithm alg;
    std::uint32_t trial;
  };
  std::vector<Cell> grid;
  for (unsigned bits : config.bits_list)
    for (double multiplier : config.multipliers)
      for (Algorithm alg : config.algorithms)
        for (std::uint32_t trial = 0; trial < config.trials; ++trial)
          grid.push_back({bits, multiplier, alg, trial});

  std::vector<BenchRecord> records(grid.size());
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      records[i] = run_trial(config, grid[i].bits, grid[i].multiplier, grid[i].alg, grid[i].trial);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= grid.size()) return;
        records[i] =
            run_trial(config, grid[i].bits, grid[i].multiplier, grid[i].alg, grid[i].trial);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

static constexpr char kCsvHeader[] =
    "algorithm,bits,multiplier,trial,seed,p,g,b,x_expected,x_found,success,elapsed_ms,"
    "candidates_tested,smooth_found,rounds";

std::string emit_csv(const std::vector<BenchRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const BenchRecord& r : records) {
    out += r.algorithm;
    out += ',';
    out += std::to_string(r.bits);
    out += ',';
    out += format_double(r.multiplier);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += r.p.get_str();
    out += ',';
    out += r.g.get_str();
    out += ',';
    out += r.b.get_str();
    out += ',';
    out += r.x_expected.get_str();
    out += ',';
    out += r.x_found.get_str();
    out += ',';
    out += r.success ? "true" : "false";
    out += ',';
    out += std::to_string(r.elapsed_ms);
    out += ',';
    out += std::to_string(r.candidates_tested);
    out += ',';
    out += std::to_string(r.smooth_found);
    out += ',';
    out += std::to_string(r.rounds);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("parse_csv: bad integer field: " + std::string(s));
  return v;
}

double parse_f64(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("parse_csv: bad number field: " + std::string(s));
  return v;
}

Int parse_int(std::string_view s) { return Int(std::string(s), 10); }

}  // namespace

std::vector<BenchRecord> parse_csv(std::string_view text) {
  std::vector<BenchRecord> records;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kCsvHeader) throw std::invalid_argument("parse_csv: unexpected header");
      saw_header = true;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 15) throw std::invalid_argument("parse_csv: wrong field count");
    BenchRecord r;
    r.algorithm = std::string(f[0]);
    r.bits = static_cast<unsigned>(parse_u64(f[1]));
    r.multiplier = parse_f64(f[2]);
    r.trial = static_cast<std::uint32_t>(parse_u64(f[3]));
    r.seed = parse_u64(f[4]);
    r.p = parse_int(f[5]);
    r.g = parse_int(f[6]);
    r.b = parse_int(f[7]);
    r.x_expected = parse_int(f[8]);
    r.x_found = parse_int(f[9]);
    if (f[10] == "true")
      r.success = true;
    else if (f[10] == "false")
      r.success = false;
    else
      throw std::invalid_argument("parse_csv: bad success field");
    r.elapsed_ms = parse_u64(f[11]);
    r.candidates_tested = parse_u64(f[12]);
    r.smooth_found = parse_u64(f[13]);
    r.rounds = parse_u64(f[14]);
    records.push_back(std::move(r));
  }
  if (!saw_header) throw std::invalid_argument("parse_csv: missing header");
  return records;
}

namespace {

double numeric_field(const BenchRecord& r, std::string_view field) {
  if (field == "bits") return r.bits;
  if (field == "multiplier") return r.multiplier;
  if (field == "trial") return r.trial;
  throw std::invalid_argument("plot: unsupported x/series field: " + std::string(field));
}

std::string series_key(const BenchRecord& r, std::string_view field) {
  if (field == "algorithm") return r.algorithm;
  if (field == "bits") return std::to_string(r.bits);
  if (field == "multiplier") return format_double(r.multiplier);
  if (field == "trial") return std::to_string(r.trial);
  throw std::invalid_argument("plot: unsupported series field: " + std::string(field));
}

double aggregate_value(const BenchRecord& r, std::string_view agg) {
  if (agg == "mean_elapsed") return static_cast<double>(r.elapsed_ms);
  if (agg == "mean_candidates") return static_cast<double>(r.candidates_tested);
  if (agg == "mean_smooth") return static_cast<double>(r.smooth_found);
  if (agg == "mean_rounds") return static_cast<double>(r.rounds);
  throw std::invalid_argument("plot: unsupported aggregate: " + std::string(agg));
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_svg_plot(const std::vector<BenchRecord>& records, std::string_view x_field,
                          std::string_view y_aggregate, std::string_view series_field,
                          bool log_y) {
  if (records.empty()) throw std::invalid_argument("plot: no records");

  // series -> x -> running mean
  std::map<std::string, std::map<double, std::pair<double, std::size_t>>> groups;
  for (const BenchRecord& r : records) {
    auto& cell = groups[series_key(r, series_field)][numeric_field(r, x_field)];
    cell.first += aggregate_value(r, y_aggregate);
    cell.second += 1;
  }

  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  std::map<std::string, std::vector<std::pair<double, double>>> lines;
  for (auto& [name, cells] : groups) {
    auto& line = lines[name];
    for (auto& [x, sum_count] : cells) {
      double y = sum_count.first / static_cast<double>(sum_count.second);
      if (log_y) y = std::log10(std::max(y, 0.1));
      line.emplace_back(x, y);
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  const double x_span = x_max - x_min > 0 ? x_max - x_min : 1.0;
  const double y_span = y_max - y_min > 0 ? y_max - y_min : 1.0;

  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 80, kRight = 640, kTop = 40, kBottom = 440;
  auto px = [&](double x) { return kLeft + (x - x_min) / x_span * (kRight - kLeft); };
  auto py = [&](double y) { return kBottom - (y - y_min) / y_span * (kBottom - kTop); };

  static constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                             "#d62728", "#9467bd", "#8c564b"};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    double xv = x_min + x_span * tick / 4.0;
    double yv = y_min + y_span * tick / 4.0;
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << kBottom << "\" x2=\"" << px(xv) << "\" y2=\""
        << kBottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(xv) << "\" y=\"" << kBottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << format_double(xv) << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kLeft << "\" y2=\""
        << py(yv) << "\" stroke=\"black\"/>\n";
    std::string label = log_y ? format_double(std::pow(10.0, yv)) : format_double(yv);
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(yv) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 45
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(x_field) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (kTop + kBottom) / 2 << ")\">" << xml_escape(y_aggregate)
      << (log_y ? " (log scale)" : "") << "</text>\n";

  std::size_t idx = 0;
  for (const auto& [name, pts] : lines) {
    const char* color = kPalette[idx % 6];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) svg << px(x) << "," << py(y) << " ";
    svg << "\"/>\n";
    double ly = kTop + 10 + 22 * static_cast<double>(idx);
    svg << "<line x1=\"" << kRight + 12 << "\" y1=\"" << ly << "\" x2=\"" << kRight + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kRight + 46 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << xml_escape(name) << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace dlog
