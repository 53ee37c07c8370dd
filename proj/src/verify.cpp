#include "qdibp/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "qdibp/circuits.hpp"
#include "qdibp/ghz_state.hpp"
#include "qdibp/layout.hpp"
#include "qdibp/protocol.hpp"
#include "qdibp/shuffle.hpp"
#include "qdibp/stats.hpp"

namespace qdibp {

std::vector<std::complex<double>> direct_wht(std::span<const std::complex<double>> amps) {
  std::size_t n = amps.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("direct_wht: length must be a power of two");
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<std::complex<double>> out(n, {0.0, 0.0});
  for (std::size_t z = 0; z < n; ++z) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t x = 0; x < n; ++x) {
      int sign = (std::popcount(z & x) & 1) ? -1 : 1;
      acc += static_cast<double>(sign) * amps[x];
    }
    out[z] = acc * scale;
  }
  return out;
}

namespace {

struct Suite {
  const VerifyOptions& opt;
  std::vector<CheckResult> results;

  void check(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // empty or informational detail on success
      r.pass = true;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

[[noreturn]] void fail(const std::string& message) { throw std::runtime_error(message); }

void expect(bool condition, const std::string& message) {
  if (!condition) fail(message);
}

std::vector<BitVec> table1_secrets() {
  return {BitVec::parse("1", 1), BitVec::parse("0", 1), BitVec::parse("1", 1)};
}

// Enumerates all assignments of n secrets of m bits each.
void for_each_secret_assignment(int n, int m,
                                const std::function<void(const std::vector<BitVec>&)>& fn) {
  std::size_t total = std::size_t{1} << (n * m);
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<BitVec> secrets;
    for (int i = 0; i < n; ++i)
      secrets.push_back(BitVec::from_u64((code >> (i * m)) & ((1u << m) - 1),
                                         static_cast<std::size_t>(m)));
    fn(secrets);
  }
}

void check_protocol_run(const ProtocolTrace& trace) {
  Dimensions dims(trace.config.n, trace.config.m);
  BitVec x1(dims.p());
  for (const BitVec& y : trace.phase1_registers) x1 ^= y;
  expect(x1 == trace.t, "phase 1 outcomes do not XOR to t");
  expect(trace.t == expected_blocks(trace.config.secrets, dims).bits,
         "t does not match the block-form construction");
  expect(is_block_permutation(AggregatedVector{dims, trace.t, false},
                              AggregatedVector{dims, trace.shuffled_t, true}),
         "shuffled vector is not a per-segment block permutation of t");
  for (int j = 0; j < dims.n; ++j) {
    BitVec seg_sum(dims.segment_width());
    for (const BitVec& y : trace.phase3_registers) seg_sum ^= segment(y, j, dims);
    expect(seg_sum == segment(trace.shuffled_t, j, dims),
           "phase 3 segment sums do not match the shuffled vector");
  }
  for (int i = 0; i < dims.n; ++i) {
    std::vector<BitVec> expected;
    for (int j = 0; j < dims.n; ++j)
      if (j != i) expected.push_back(trace.config.secrets[static_cast<std::size_t>(j)]);
    std::vector<BitVec> got = trace.recovered[static_cast<std::size_t>(i)];
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    expect(got == expected, "broker " + std::to_string(i) +
                                " did not recover the other secrets");
  }
  for (const TraceEvent& ev : trace.events) {
    if (ev.event != "message" || ev.phase != 3 || ev.seg < 0) continue;
    if (ev.actor.rfind("broker_", 0) == 0) {
      int sender = std::stoi(ev.actor.substr(7));
      expect(ev.seg != sender, "broker leaked its own segment");
    }
  }
}

void add_bitvec_checks(Suite& s) {
  s.check("bitvec/xor_group_laws", [&] {
    for (std::size_t len = 1; len <= 4; ++len) {
      std::size_t space = std::size_t{1} << len;
      for (std::size_t a = 0; a < space; ++a)
        for (std::size_t b = 0; b < space; ++b) {
          BitVec va = BitVec::from_u64(a, len), vb = BitVec::from_u64(b, len);
          expect((va ^ vb) == (vb ^ va), "xor is not commutative");
          expect((va ^ BitVec::zero(len)) == va, "zero is not the identity");
          expect((va ^ va) == BitVec::zero(len), "xor is not self-inverse");
          for (std::size_t c = 0; c < space; ++c) {
            BitVec vc = BitVec::from_u64(c, len);
            expect(((va ^ vb) ^ vc) == (va ^ (vb ^ vc)), "xor is not associative");
          }
        }
    }
    Rng rng = Rng::derive(s.opt.seed, "verify/xor");
    for (int i = 0; i < 300; ++i) {
      BitVec a = BitVec::random(97, rng), b = BitVec::random(97, rng);
      expect(((a ^ b) ^ b) == a, "xor round trip failed on wide vectors");
    }
    return "exhaustive len<=4 plus 300 wide round trips";
  });

  s.check("bitvec/dot_bilinearity", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/dot");
    for (int i = 0; i < 1000; ++i) {
      BitVec a = BitVec::random(33, rng), b = BitVec::random(33, rng),
             c = BitVec::random(33, rng);
      expect(dot(a ^ b, c) == (dot(a, c) ^ dot(b, c)), "dot is not bilinear");
    }
    return "1000 random triples";
  });

  s.check("bitvec/cip", [&] {
    int max_p = s.opt.full ? 12 : 8;
    for (int p = 1; p <= max_p; ++p) {
      std::size_t space = std::size_t{1} << p;
      for (std::size_t c = 0; c < space; ++c) {
        BitVec vc = BitVec::from_u64(c, static_cast<std::size_t>(p));
        std::size_t zeros = 0;
        for (std::size_t x = 0; x < space; ++x)
          if (dot(vc, BitVec::from_u64(x, static_cast<std::size_t>(p))) == 0) ++zeros;
        if (c == 0) expect(zeros == space, "zero mask must annihilate every vector");
        else expect(zeros == space / 2, "nonzero mask must split the space in half");
      }
    }
    return "exhaustive up to p=" + std::to_string(max_p);
  });

  s.check("bitvec/text_round_trip", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/text");
    for (int i = 0; i < 1000; ++i) {
      std::size_t len = 1 + rng.below(130);
      BitVec v = BitVec::random(len, rng);
      expect(BitVec::parse(v.format(3), len) == v, "binary round trip failed");
      expect(BitVec::from_hex(v.to_hex(), len) == v, "hex round trip failed");
    }
    return "1000 random vectors, binary and hex";
  });

  s.check("bitvec/random_balance", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/balance");
    int ones = 0;
    for (int i = 0; i < 10000; ++i)
      if (BitVec::random(1, rng).bit(0)) ++ones;
    double frac = ones / 10000.0;
    expect(frac >= 0.45 && frac <= 0.55, "single-bit draws are not balanced");
    std::ostringstream os;
    os << "fraction of ones " << frac;
    return os.str();
  });
}

void add_layout_checks(Suite& s) {
  s.check("layout/extended_structure", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/layout");
    for (int iter = 0; iter < 200; ++iter) {
      int n = 2 + static_cast<int>(rng.below(4));
      int m = 1 + static_cast<int>(rng.below(3));
      Dimensions dims(n, m);
      int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      BitVec secret = BitVec::random(static_cast<std::size_t>(m), rng);
      ExtendedSecret ext = build_extended(i, secret, dims);
      for (int j = 0; j < n; ++j) {
        BitVec seg = segment(ext.bits, j, dims);
        for (int k = 0; k < n; ++k) {
          BitVec blk = block(seg, k, dims);
          bool expect_secret = (j == i) ? (k != i) : (k == i);
          expect(blk == (expect_secret ? secret : BitVec::zero(secret.size())),
                 "extended vector block structure violated");
        }
      }
    }
    return "200 random extended vectors checked block by block";
  });

  s.check("layout/aggregate_oracle", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/aggregate");
    auto run_one = [](const std::vector<BitVec>& secrets, const Dimensions& dims) {
      std::vector<ExtendedSecret> ext;
      for (int i = 0; i < dims.n; ++i)
        ext.push_back(build_extended(i, secrets[static_cast<std::size_t>(i)], dims));
      expect(aggregate(ext, dims).bits == expected_blocks(secrets, dims).bits,
             "aggregate disagrees with the block-form oracle");
    };
    for (int iter = 0; iter < 100; ++iter) {
      int n = 2 + static_cast<int>(rng.below(4));
      int m = 1 + static_cast<int>(rng.below(3));
      Dimensions dims(n, m);
      std::vector<BitVec> secrets;
      for (int i = 0; i < n; ++i)
        secrets.push_back(BitVec::random(static_cast<std::size_t>(m), rng));
      run_one(secrets, dims);
    }
    if (s.opt.full) {
      for (int n = 2; n <= 4; ++n)
        for (int m = 1; m <= 2; ++m)
          for_each_secret_assignment(n, m, [&](const std::vector<BitVec>& secrets) {
            run_one(secrets, Dimensions(n, m));
          });
      return std::string("100 random configs plus exhaustive n<=4, m<=2");
    }
    return std::string("100 random configs");
  });

  s.check("layout/diagonal_and_symmetry", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/diag");
    for (int iter = 0; iter < 200; ++iter) {
      int n = 2 + static_cast<int>(rng.below(4));
      int m = 1 + static_cast<int>(rng.below(3));
      Dimensions dims(n, m);
      std::vector<BitVec> secrets;
      for (int i = 0; i < n; ++i)
        secrets.push_back(BitVec::random(static_cast<std::size_t>(m), rng));
      BitVec t = expected_blocks(secrets, dims).bits;
      for (int i = 0; i < n; ++i) {
        expect(block(segment(t, i, dims), i, dims).is_zero(), "diagonal block not zero");
        for (int j = 0; j < n; ++j)
          expect(block(segment(t, i, dims), j, dims) ==
                     block(segment(t, j, dims), i, dims),
                 "aggregated blocks are not symmetric");
      }
    }
    return "200 random configs";
  });

  s.check("layout/offset_invariance", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/offset");
    for (int iter = 0; iter < 100; ++iter) {
      int n = 2 + static_cast<int>(rng.below(4));
      int m = 1 + static_cast<int>(rng.below(3));
      Dimensions dims(n, m);
      std::vector<BitVec> secrets, offset_secrets;
      BitVec c = BitVec::random(static_cast<std::size_t>(m), rng);
      for (int i = 0; i < n; ++i) {
        secrets.push_back(BitVec::random(static_cast<std::size_t>(m), rng));
        offset_secrets.push_back(secrets.back() ^ c);
      }
      expect(expected_blocks(secrets, dims).bits ==
                 expected_blocks(offset_secrets, dims).bits,
             "common offset changed the aggregated vector");
    }
    return "100 random configs";
  });
}

void add_shuffle_checks(Suite& s) {
  s.check("shuffle/uniformity", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/perm");
    std::map<std::vector<int>, std::uint64_t> counts;
    for (int i = 0; i < 6000; ++i) counts[random_permutation(3, rng).map()] += 1;
    expect(counts.size() == 6, "some permutation of S_3 never appeared");
    std::vector<std::uint64_t> cells;
    for (const auto& [perm, c] : counts) cells.push_back(c);
    double stat = chi_square_uniform(cells);
    double pval = chi_square_survival(5, stat);
    expect(pval > 0.01, "S_3 frequencies reject uniformity");
    std::ostringstream os;
    os << "chi-square " << stat << ", p " << pval;
    return os.str();
  });

  s.check("shuffle/multiset_and_inverse", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/shuffle");
    for (int iter = 0; iter < 500; ++iter) {
      int n = 2 + static_cast<int>(rng.below(4));
      int m = 1 + static_cast<int>(rng.below(3));
      Dimensions dims(n, m);
      std::vector<BitVec> secrets;
      for (int i = 0; i < n; ++i)
        secrets.push_back(BitVec::random(static_cast<std::size_t>(m), rng));
      AggregatedVector t = expected_blocks(secrets, dims);
      std::vector<Permutation> perms;
      for (int i = 0; i < n; ++i) perms.push_back(random_permutation(n, rng));
      AggregatedVector shuffled = shuffle_aggregated(t, perms);
      expect(is_block_permutation(t, shuffled), "shuffle changed a block multiset");
      std::vector<Permutation> inverse;
      for (const Permutation& p : perms) inverse.push_back(p.inverse());
      expect(apply_block_permutations(shuffled.bits, inverse, dims) == t.bits,
             "inverse permutations did not restore t");
    }
    return "500 random shuffles";
  });

  s.check("shuffle/position_uniformity", [&] {
    // Fixed vector whose segment-0 blocks are pairwise distinct, so the
    // landing position of one block value is directly observable.
    Dimensions dims(3, 2);
    std::vector<BitVec> secrets = {BitVec::parse("01", 2), BitVec::parse("10", 2),
                                   BitVec::parse("11", 2)};
    AggregatedVector t = expected_blocks(secrets, dims);
    BitVec watched = block(segment(t.bits, 0, dims), 1, dims);  // s_0 ^ s_1
    Rng rng = Rng::derive(s.opt.seed, "verify/positions");
    int iterations = s.opt.full ? 10000 : 3000;
    std::vector<std::uint64_t> counts(3, 0);
    for (int iter = 0; iter < iterations; ++iter) {
      std::vector<Permutation> perms;
      for (int i = 0; i < 3; ++i) perms.push_back(random_permutation(3, rng));
      AggregatedVector shuffled = shuffle_aggregated(t, perms);
      BitVec seg = segment(shuffled.bits, 0, dims);
      for (int k = 0; k < 3; ++k)
        if (block(seg, k, dims) == watched) counts[static_cast<std::size_t>(k)] += 1;
    }
    double stat = chi_square_uniform(counts);
    double pval = chi_square_survival(2, stat);
    expect(pval > 0.01, "block landing positions reject uniformity");
    std::ostringstream os;
    os << iterations << " shuffles, chi-square " << stat << ", p " << pval;
    return os.str();
  });
}

void add_qsim_checks(Suite& s) {
  s.check("qsim/wht_involution", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/wht");
    for (int p = 1; p <= 10; ++p) {
      std::vector<std::complex<double>> amps(std::size_t{1} << p);
      for (auto& a : amps) a = {rng.unit() - 0.5, rng.unit() - 0.5};
      std::vector<std::complex<double>> copy = amps;
      wht(copy);
      wht(copy);
      for (std::size_t i = 0; i < amps.size(); ++i)
        expect(std::abs(copy[i] - amps[i]) < 1e-12, "transform is not an involution");
    }
    return "random amplitudes, p<=10";
  });

  s.check("qsim/wht_direct_summation", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/wht_direct");
    int max_p = s.opt.full ? 8 : 6;
    double worst = 0.0;
    for (int p = 1; p <= max_p; ++p) {
      std::vector<std::complex<double>> amps(std::size_t{1} << p);
      for (auto& a : amps) a = {rng.unit() - 0.5, rng.unit() - 0.5};
      std::vector<std::complex<double>> fast = amps;
      wht(fast);
      std::vector<std::complex<double>> slow = direct_wht(amps);
      for (std::size_t i = 0; i < amps.size(); ++i)
        worst = std::max(worst, std::abs(fast[i] - slow[i]));
    }
    expect(worst < 1e-10, "butterfly disagrees with direct summation");
    std::ostringstream os;
    os << "max error " << worst << " up to p=" << max_p;
    return os.str();
  });

  s.check("qsim/phase_oracle_accumulation", [&] {
    // The three Table-1 masks must leave exactly the phase pattern of their
    // XOR on every amplitude.
    Dimensions dims(3, 1);
    GhzDiagonalState state(9, 4);
    std::vector<BitVec> secrets = table1_secrets();
    for (int i = 0; i < 3; ++i)
      state.apply_phase_oracle(build_extended(i, secrets[static_cast<std::size_t>(i)], dims).bits);
    BitVec t = expected_blocks(secrets, dims).bits;
    std::uint64_t t_mask = t.to_u64();
    auto amps = state.amps();
    double base = std::pow(2.0, -4.5);
    for (std::size_t x = 0; x < amps.size(); ++x) {
      double want = (std::popcount(x & t_mask) & 1) ? -base : base;
      expect(std::abs(amps[x].real() - want) < 1e-15 && amps[x].imag() == 0.0,
             "amplitude phases do not match the aggregated mask");
    }
    expect(std::abs(state.norm_sq() - 1.0) < 1e-12, "norm drifted");
    return "all 512 amplitudes carry (-1)^(t.x)";
  });

  s.check("qsim/sampling_constraint", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/sampling");
    GhzDiagonalState fresh(4, 3);
    for (int i = 0; i < 100; ++i) {
      std::vector<BitVec> ys = fresh.sample_measurement(rng);
      BitVec x(4);
      for (const BitVec& y : ys) x ^= y;
      expect(x.is_zero(), "fresh state outcomes must XOR to zero");
    }
    Dimensions dims(3, 1);
    GhzDiagonalState state(9, 4);
    std::vector<BitVec> secrets = table1_secrets();
    for (int i = 0; i < 3; ++i)
      state.apply_phase_oracle(build_extended(i, secrets[static_cast<std::size_t>(i)], dims).bits);
    BitVec t = expected_blocks(secrets, dims).bits;
    int samples = s.opt.full ? 1000 : 200;
    for (int i = 0; i < samples; ++i) {
      std::vector<BitVec> ys = state.sample_measurement(rng);
      BitVec x(9);
      for (const BitVec& y : ys) x ^= y;
      expect(x == t, "protocol state outcomes must XOR to t");
    }
    return std::to_string(samples) + " constrained samples";
  });

  s.check("qsim/marginal_uniformity", [&] {
    GhzDiagonalState state(2, 3);
    state.apply_phase_oracle(BitVec::parse("10", 2));
    Rng rng = Rng::derive(s.opt.seed, "verify/marginal");
    int samples = s.opt.full ? 100000 : 20000;
    std::vector<std::uint64_t> counts(16, 0);
    for (int i = 0; i < samples; ++i) {
      std::vector<BitVec> ys = state.sample_measurement(rng, 0);
      std::size_t cell = (ys[2].to_u64() << 2) | ys[1].to_u64();
      counts[cell] += 1;
    }
    double stat = chi_square_uniform(counts);
    double pval = chi_square_survival(15, stat);
    expect(pval > 0.01, "free-register marginal rejects uniformity");
    std::ostringstream os;
    os << samples << " samples, chi-square " << stat << ", p " << pval;
    return os.str();
  });

  s.check("qsim/phase_form_equivalence", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/phase_form");
    for (int iter = 0; iter < 50; ++iter) {
      int p = 1 + static_cast<int>(rng.below(6));
      GhzDiagonalState dense_tier(p, 3);
      GhzPhaseState phase_tier(p, 3);
      for (int k = 0; k < 3; ++k) {
        BitVec mask = BitVec::random(static_cast<std::size_t>(p), rng);
        dense_tier.apply_phase_oracle(mask);
        phase_tier.apply_phase_oracle(mask);
      }
      std::vector<double> a = dense_tier.phase_distribution();
      std::vector<double> b = phase_tier.phase_distribution();
      expect(tv_distance(a, b) < 1e-10,
             "explicit and closed-form representations disagree");
    }
    return "50 random oracle sequences, exact distributions";
  });

  s.check("qsim/order_independence", [&] {
    // Solving a different register for the XOR constraint must not change
    // the joint outcome distribution.
    GhzDiagonalState state(2, 3);
    state.apply_phase_oracle(BitVec::parse("01", 2));
    int samples = s.opt.full ? 60000 : 20000;
    double worst_p = 1.0;
    for (int solved = 0; solved < 3; ++solved) {
      Rng rng = Rng::derive(s.opt.seed, "verify/order/" + std::to_string(solved));
      std::map<std::size_t, std::uint64_t> counts;
      for (int i = 0; i < samples; ++i) {
        std::vector<BitVec> ys = state.sample_measurement(rng, solved);
        counts[(ys[2].to_u64() << 4) | (ys[1].to_u64() << 2) | ys[0].to_u64()] += 1;
      }
      expect(counts.size() == 16, "support has the wrong size");
      std::vector<std::uint64_t> cells;
      for (const auto& [k, v] : counts) cells.push_back(v);
      double pval = chi_square_survival(15, chi_square_uniform(cells));
      worst_p = std::min(worst_p, pval);
    }
    expect(worst_p > 0.01, "a solved-register choice skews the distribution");
    std::ostringstream os;
    os << "three register choices, worst p " << worst_p;
    return os.str();
  });
}

void add_dense_checks(Suite& s) {
  s.check("dense/ghz_preparation", [&] {
    for (int r : {2, 3, 4, 5, 8}) {
      GateList gl = ghz_prep_gates(r);
      DenseState state = run_gate_list(gl, s.opt.dense_cap);
      DenseState reference(r, s.opt.dense_cap);
      auto ref = reference.amps();
      // (|0...0> + |1...1>)/sqrt(2)
      std::vector<std::complex<double>> want(ref.size(), {0.0, 0.0});
      want.front() = {1.0 / std::sqrt(2.0), 0.0};
      want.back() = {1.0 / std::sqrt(2.0), 0.0};
      std::complex<double> inner{0.0, 0.0};
      auto amps = state.amps();
      for (std::size_t i = 0; i < amps.size(); ++i) inner += std::conj(want[i]) * amps[i];
      expect(std::norm(inner) >= 1.0 - 1e-12, "prepared state is not the GHZ state");
      int want_depth = static_cast<int>(std::ceil(std::log2(r)));
      expect(cnot_depth(gl) == want_depth, "CNOT depth is not ceil(log2 r)");
    }
    return "r in {2,3,4,5,8}, fidelity and depth";
  });

  s.check("dense/phase_kickback", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/kickback");
    int masks = s.opt.full ? 50 : 10;
    int max_input = s.opt.full ? 9 : 7;
    for (int iter = 0; iter < masks; ++iter) {
      int width = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_input)));
      BitVec mask = BitVec::random(static_cast<std::size_t>(width), rng);
      int nq = width + 1;
      DenseState state(nq, s.opt.dense_cap);
      // Random input-register state, target prepared in |->.
      std::vector<std::complex<double>> input(std::size_t{1} << width);
      double norm = 0.0;
      for (auto& a : input) {
        a = {rng.unit() - 0.5, rng.unit() - 0.5};
        norm += std::norm(a);
      }
      for (auto& a : input) a /= std::sqrt(norm);
      auto amps = state.amps();
      std::fill(amps.begin(), amps.end(), std::complex<double>{0.0, 0.0});
      for (std::size_t x = 0; x < input.size(); ++x) amps[x] = input[x];
      state.apply_x(width);
      state.apply_h(width);
      state.apply_xor_oracle(mask, 0, width);

      // Reference built as the diagonal phase on the input register with the
      // target still in |->.
      DenseState reference(nq, s.opt.dense_cap);
      auto ref = reference.amps();
      std::fill(ref.begin(), ref.end(), std::complex<double>{0.0, 0.0});
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      std::uint64_t m = mask.to_u64();
      for (std::size_t x = 0; x < input.size(); ++x) {
        double sign = (std::popcount(x & m) & 1) ? -1.0 : 1.0;
        ref[x] = sign * input[x] * inv_sqrt2;
        ref[x | (std::size_t{1} << width)] = -sign * input[x] * inv_sqrt2;
      }
      expect(state.fidelity(reference) >= 1.0 - 1e-10,
             "oracle on |-> target is not the diagonal phase");
    }
    return std::to_string(masks) + " random masks";
  });

  s.check("dense/phase1_oracle_runs", [&] {
    Dimensions dims(2, 1);
    // All-zero secrets: outcomes XOR to zero.
    std::vector<ExtendedSecret> ext_zero = {build_extended(0, BitVec::zero(1), dims),
                                            build_extended(1, BitVec::zero(1), dims)};
    GateList zero_circuit = build_phase1_circuit(dims, ext_zero, s.opt.dense_cap);
    DenseState zero_state = run_gate_list(zero_circuit, s.opt.dense_cap);
    auto groups = measured_registers(zero_circuit);
    Rng rng = Rng::derive(s.opt.seed, "verify/dense_phase1");
    DiscreteSampler zero_sampler(register_distribution(zero_state, groups));
    for (int i = 0; i < 200; ++i) {
      auto ys = split_outcome(zero_sampler.sample(rng), 3, 4);
      BitVec x(4);
      for (const BitVec& y : ys) x ^= y;
      expect(x.is_zero(), "all-zero secrets must XOR to zero");
    }

    // s_0 = s_1 = 1: outcomes XOR to the block-form vector.
    std::vector<BitVec> ones = {BitVec::parse("1", 1), BitVec::parse("1", 1)};
    std::vector<ExtendedSecret> ext_ones = {build_extended(0, ones[0], dims),
                                            build_extended(1, ones[1], dims)};
    GateList circuit = build_phase1_circuit(dims, ext_ones, s.opt.dense_cap);
    DenseState state = run_gate_list(circuit, s.opt.dense_cap);
    BitVec t = expected_blocks(ones, dims).bits;
    DiscreteSampler sampler(register_distribution(state, measured_registers(circuit)));
    for (int i = 0; i < 200; ++i) {
      auto ys = split_outcome(sampler.sample(rng), 3, 4);
      BitVec x(4);
      for (const BitVec& y : ys) x ^= y;
      expect(x == t, "phase 1 outcomes must XOR to the aggregated vector");
    }
    return "n=2, m=1 gate-level runs";
  });

  s.check("dense/phase3_oracle_runs", [&] {
    Dimensions dims(2, 1);
    std::vector<BitVec> secrets = {BitVec::parse("1", 1), BitVec::parse("0", 1)};
    AggregatedVector t = expected_blocks(secrets, dims);
    Rng rng = Rng::derive(s.opt.seed, "verify/dense_phase3");
    std::vector<Permutation> perms = {random_permutation(2, rng), random_permutation(2, rng)};
    AggregatedVector shuffled = shuffle_aggregated(t, perms);
    GateList circuit = build_phase3_circuit(dims, shuffled.bits, s.opt.dense_cap);
    DenseState state = run_gate_list(circuit, s.opt.dense_cap);
    DiscreteSampler sampler(register_distribution(state, measured_registers(circuit)));
    for (int i = 0; i < 200; ++i) {
      auto ys = split_outcome(sampler.sample(rng), 3, 4);
      BitVec x(4);
      for (const BitVec& y : ys) x ^= y;
      expect(x == shuffled.bits, "phase 3 outcomes must XOR to the shuffled vector");
    }
    return "n=2, m=1 gate-level runs";
  });

  if (s.opt.full) {
    s.check("dense/tier_equivalence", [&] {
      Dimensions dims(2, 1);
      std::vector<BitVec> secrets = {BitVec::parse("1", 1), BitVec::parse("0", 1)};
      std::vector<ExtendedSecret> ext = {build_extended(0, secrets[0], dims),
                                         build_extended(1, secrets[1], dims)};
      GateList circuit = build_phase1_circuit(dims, ext, s.opt.dense_cap);
      DenseState state = run_gate_list(circuit, s.opt.dense_cap);
      std::vector<double> dense_exact =
          register_distribution(state, measured_registers(circuit));

      GhzDiagonalState structured(4, 3);
      for (const ExtendedSecret& e : ext) structured.apply_phase_oracle(e.bits);
      std::vector<double> structured_exact = structured.tuple_distribution();

      for (std::size_t i = 0; i < dense_exact.size(); ++i)
        expect((dense_exact[i] > 1e-12) == (structured_exact[i] > 1e-12),
               "outcome supports differ");
      double exact_tv = tv_distance(dense_exact, structured_exact);
      expect(exact_tv < 1e-10, "exact tier distributions disagree");

      Rng rng = Rng::derive(s.opt.seed, "verify/tier");
      DiscreteSampler sampler(dense_exact);
      std::vector<std::uint64_t> counts(dense_exact.size(), 0);
      for (int i = 0; i < 100000; ++i) counts[sampler.sample(rng)] += 1;
      double sampled_tv = tv_distance(to_distribution(counts), structured_exact);
      expect(sampled_tv < 0.03, "sampled dense distribution strays from structured");
      std::ostringstream os;
      os << "exact TV " << exact_tv << ", sampled TV " << sampled_tv;
      return os.str();
    });
  }
}

void add_protocol_checks(Suite& s) {
  s.check("protocol/correctness", [&] {
    Rng rng = Rng::derive(s.opt.seed, "verify/protocol");
    int runs = s.opt.full ? 60 : 25;
    for (int iter = 0; iter < runs; ++iter) {
      ProtocolConfig config;
      config.n = 2 + static_cast<int>(rng.below(3));
      config.m = 1 + static_cast<int>(rng.below(2));
      config.seed = rng.next_u64();
      for (int i = 0; i < config.n; ++i)
        config.secrets.push_back(BitVec::random(static_cast<std::size_t>(config.m), rng));
      check_protocol_run(run_full(config));
    }
    if (s.opt.full) {
      for (auto [n, m] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
        for_each_secret_assignment(n, m, [&](const std::vector<BitVec>& secrets) {
          ProtocolConfig config;
          config.n = n;
          config.m = m;
          config.secrets = secrets;
          config.seed = rng.next_u64();
          check_protocol_run(run_full(config));
        });
      }
      return std::string("60 random configs plus exhaustive (2,1), (2,2), (3,1)");
    }
    return std::to_string(runs) + " random configs";
  });

  s.check("protocol/wide_configs", [&] {
    // Widths beyond the structured cap exercise the closed-form resource.
    Rng rng = Rng::derive(s.opt.seed, "verify/wide");
    for (int iter = 0; iter < 5; ++iter) {
      ProtocolConfig config;
      config.n = 4;
      config.m = 2;  // p = 32
      config.seed = rng.next_u64();
      for (int i = 0; i < config.n; ++i)
        config.secrets.push_back(BitVec::random(2, rng));
      check_protocol_run(run_full(config));
    }
    return "5 runs at p=32";
  });

  s.check("protocol/determinism", [&] {
    ProtocolConfig config;
    config.n = 3;
    config.m = 1;
    config.secrets = table1_secrets();
    config.seed = s.opt.seed;
    std::string a = trace_to_jsonl(run_full(config));
    std::string b = trace_to_jsonl(run_full(config));
    expect(a == b, "same seed produced different traces");
    return "byte-identical replay";
  });

  s.check("protocol/offset_coupling", [&] {
    int max_m = s.opt.full ? 3 : 1;
    for (int m = 1; m <= max_m; ++m) {
      for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
        ProtocolConfig base;
        base.n = 3;
        base.m = m;
        base.seed = s.opt.seed + m;
        Rng rng = Rng::derive(s.opt.seed, "verify/offset_secrets/" + std::to_string(m));
        for (int i = 0; i < base.n; ++i)
          base.secrets.push_back(BitVec::random(static_cast<std::size_t>(m), rng));
        ProtocolConfig shifted = base;
        BitVec offset = BitVec::from_u64(c, static_cast<std::size_t>(m));
        for (BitVec& sv : shifted.secrets) sv ^= offset;
        ProtocolTrace ta = run_full(base);
        ProtocolTrace tb = run_full(shifted);
        expect(ta.t == tb.t, "offset changed t");
        expect(ta.shuffled_t == tb.shuffled_t, "offset changed the shuffled vector");
        // Everything the aggregator observes must coincide: compare all
        // events except the per-broker decode outputs.
        auto visible = [](const ProtocolTrace& tr) {
          std::string out;
          for (const TraceEvent& ev : tr.events)
            if (ev.event != "decode" && ev.event != "recovered")
              out += ev.event + "|" + ev.actor + "|" + ev.payload_hex + "|" + ev.peer + "\n";
          return out;
        };
        expect(visible(ta) == visible(tb), "offset changed an observable message");
      }
    }
    return std::string("all offsets up to m=") + std::to_string(max_m);
  });

  if (s.opt.full) {
    s.check("protocol/anonymity_positions", [&] {
      // With debug permutations on, the landing position of each foreign
      // block is sigma_i^{-1}(j); across seeded runs it must be uniform.
      ProtocolConfig config;
      config.n = 3;
      config.m = 1;
      config.secrets = table1_secrets();
      config.debug_permutations = true;
      Rng seeder = Rng::derive(s.opt.seed, "verify/anonymity");
      std::vector<std::vector<std::uint64_t>> counts(
          9, std::vector<std::uint64_t>(3, 0));  // (i, j) pair -> position
      for (int run = 0; run < 10000; ++run) {
        config.seed = seeder.next_u64();
        ProtocolTrace trace = run_full(config);
        for (int i = 0; i < 3; ++i) {
          Permutation inv = trace.permutations[static_cast<std::size_t>(i)].inverse();
          for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            counts[static_cast<std::size_t>(i * 3 + j)]
                  [static_cast<std::size_t>(inv(j))] += 1;
          }
        }
      }
      double worst = 1.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          double pval = chi_square_survival(
              2, chi_square_uniform(counts[static_cast<std::size_t>(i * 3 + j)]));
          worst = std::min(worst, pval);
        }
      expect(worst > 0.01, "foreign-block positions reject uniformity");
      std::ostringstream os;
      os << "10000 runs, worst p " << worst;
      return os.str();
    });
  }
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Suite suite{options, {}};
  add_bitvec_checks(suite);
  add_layout_checks(suite);
  add_shuffle_checks(suite);
  add_qsim_checks(suite);
  add_dense_checks(suite);
  add_protocol_checks(suite);
  return std::move(suite.results);
}

nlohmann::json verification_report(const std::vector<CheckResult>& results,
                                   const VerifyOptions& options) {
  nlohmann::ordered_json report;
  report["suite"] = options.full ? "full" : "fast";
  report["seed"] = options.seed;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  int passed = 0;
  for (const CheckResult& r : results) {
    nlohmann::ordered_json item;
    item["name"] = r.name;
    item["pass"] = r.pass;
    item["detail"] = r.detail;
    checks.push_back(std::move(item));
    if (r.pass) ++passed;
  }
  report["checks"] = std::move(checks);
  report["passed"] = passed;
  report["failed"] = static_cast<int>(results.size()) - passed;
  report["ok"] = passed == static_cast<int>(results.size());
  return report;
}

}  // namespace qdibp
