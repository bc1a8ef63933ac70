#pragma once

#include <map>
#include <string>
#include <vector>

#include "qcbounds/conic.hpp"
#include "qcbounds/matrix.hpp"
#include "qcbounds/quadext.hpp"
#include "qcbounds/reduced_sdp.hpp"

namespace qcb {

// Exact PSD test by symmetric elimination: a negative pivot fails, a zero pivot
// requires the rest of its row to vanish.
template <class T>
bool psd_exact(const DenseMatrix<T>& m);

// Exact check of a point against every row and, when check_blocks is set, every
// PSD block. Returns the labels of the violated constraints.
std::vector<std::string> check_point(const ConicProgram<Rational>& p, const std::vector<Rational>& x,
                                     bool check_blocks = true);

// "a", "p/q", "a+b*sqrt3", "a-b*sqrt3" or a decimal.
QuadExt parse_quadext(const std::string& text);

// Dual certificate of the relaxation (sdpx_relax) or the Lovasz program
// (red_lovasz). Y blocks are keyed by BlockId; absent blocks are zero.
// Scalars: "w" for red_lovasz (absent: pinned from the weight-n row), "Q0".."Qn"
// and "C0".."C{delta-1}" for sdpx_relax (absent: zero).
struct DualCertificate {
  int n = 0;
  long K = 1;
  int delta = 1;
  ModelShape shape = ModelShape::lovasz;
  std::map<BlockId, DenseMatrix<QuadExt>> blocks;
  std::map<std::string, QuadExt> scalars;
  std::string alpha;  // as recorded by the producer; informational
};

DualCertificate parse_certificate(const std::string& json_text);
DualCertificate load_certificate(const std::string& path);
std::string certificate_to_json(const DualCertificate& c);

struct VerificationReport {
  bool certified = false;
  std::string verdict;
  QuadExt alpha;
  double alpha_value = 0;
  double budget = 0;
  // 1 + sum of absolute values of all certificate entries; alpha must exceed
  // budget times this.
  double scale = 0;
  std::map<std::string, double> max_residual;  // per equation family
  std::map<std::string, bool> block_psd;       // per block key
  std::string to_json() const;
};

// Recomputes y^{t,p}_{i,j} = gamma^{-1} sum_{a,k} alpha Y^{(a,k)}_{i-k,j-k} in
// Q(sqrt 3), evaluates every dual equation exactly and checks each block by
// exact elimination.
VerificationReport verify_certificate(const DualCertificate& c, double budget = 1e-12);

struct CertifyOptions {
  DualNormalization normalization = DualNormalization::trace;
  SdpOptions sdp;
  // Re-centering allows trace_room / alpha* in the normalization row.
  double trace_room = 20;
  // A verified certificate counts only when alpha >= alpha_margin.
  double alpha_margin = 1e-3;
  std::int64_t max_denominator = 1000000;
  int max_rounds = 6;
  double pin_fraction = 0.25;
  bool verbose = false;
};

struct CertifyResult {
  bool certified = false;
  double float_alpha = 0;  // optimum of the floating-point dual
  double margin = 0;       // smallest Y eigenvalue bound after re-centering
  int rounds = 0;
  DualCertificate certificate;
  VerificationReport report;
  std::string message;
};

// Float dual solve, re-centering for eigenvalue margin, rounding, exact repair
// of the dual equations and exact verification. Lovasz and relaxation shapes.
CertifyResult extract_certificate(const ReducedModel& m, const CertifyOptions& opt = {});

}  // namespace qcb
