#ifndef HOLOKIT_FRIDMAN_HPP
#define HOLOKIT_FRIDMAN_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "holokit/metrics.hpp"
#include "holokit/scaling.hpp"

namespace holokit {

/// Explicit biholomorphism from a model source (ball or polydisc, used
/// only up to the shrink factor) into a target domain. Both directions
/// are stored so pullbacks stay exact.
struct EmbeddingCandidate {
    std::string id;
    std::string source;  // "ball" or "polydisc"
    int n = 0;
    double shrink = 1.0;
    std::string certificate;  // "explicit-inverse" or "shrunken"
    std::function<Point(const Point&)> forward;
    std::function<Point(const Point&)> inverse;
};

/// w -> center + diag(radii) w.
EmbeddingCandidate affineCandidate(const Point& center,
                                   const std::vector<double>& radii,
                                   const std::string& source,
                                   double shrink = 1.0);
/// Involutive ball automorphism exchanging 0 and a.
EmbeddingCandidate ballAutomorphismCandidate(const Point& a, double shrink);
/// Componentwise Moebius automorphism of the polydisc exchanging 0 and a.
EmbeddingCandidate polydiscAutomorphismCandidate(const Point& a,
                                                 double shrink);
/// Ball into the Siegel model, sending 0 to the given interior point.
EmbeddingCandidate cayleyCandidate(const Point& siegelPoint, double shrink);

struct CandidateCheck {
    bool ok = false;
    std::string detail;
};

/// Round trips inverse(forward(w)) = w on 100 seeded source points to
/// 1e-10 and samples the image against rho of the target.
CandidateCheck verifyCandidate(const Domain& X, const EmbeddingCandidate& c,
                               unsigned seed = 7);

struct FridmanBound {
    Point p;
    std::string model;
    double bestR = 0.0;
    double upper = 0.0;  // 1 / bestR; infinity when no candidate covers
    int witness = -1;    // index into the candidate list
    bool noInformation = true;
    std::vector<std::string> log;  // one line per candidate
};

/// For each verified candidate, the largest probed radius R such that
/// every ray probe point of the Kobayashi ball around p pulls back into
/// the shrunken source; returns the smallest 1/R over candidates. Always
/// an upper bound for the invariant, never a certification of its value.
FridmanBound fridmanUpper(const Domain& X, const Point& p,
                          const std::string& model,
                          const std::vector<EmbeddingCandidate>& candidates,
                          const MetricConfig& cfg, int extraDirections = 50);

struct ZeroCertificate {
    bool certified = false;
    std::string biholomorphism;
    std::string reason;  // refusal reason when not certified
    /// (shrink factor s, exact model radius covered by the s-image).
    std::vector<std::pair<double, double>> exhaustion;
};

/// Certifies a vanishing invariant for cataloged homogeneous models by
/// emitting the explicit biholomorphism and the exhaustion family; any
/// other domain gets a refusal (upper bounds remain available).
ZeroCertificate fridmanZeroCert(const Domain& X, const Point& p,
                                const std::string& model);

struct FridmanRow {
    int j = 0;
    double dj = 0.0;
    double bestR = 0.0;
    double upper = 0.0;
    std::string candidateId;
    double wallSeconds = 0.0;
    std::string error;
};

/// Upper bounds along a boundary-approaching sequence. Candidate families
/// by class: strongly pseudoconvex domains use the rescaling maps composed
/// with the Cayley transform, finite type charts use affine balls fitted
/// in the rescaled domain and pulled back, product-polyhedron corners use
/// the componentwise Moebius corner maps applied to shrunken polydiscs.
std::vector<FridmanRow> fridmanBoundaryExperiment(
    const Domain& D, const std::vector<Point>& seq, const std::string& model,
    const MetricConfig& cfg, int extraDirections = 50);

/// CSV columns (j, d_j, bestR, upper, candidate id, wall time).
std::string fridmanRowsCsv(const std::vector<FridmanRow>& rows);

}  // namespace holokit

#endif
