#include "hmo/problems.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <vector>

#include "hmo/rng.hpp"

namespace hmo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kGallagherPeaks = 20;

// Extra basins for the gallagher-like landscape, deterministic per dimension.
struct GallagherBasins {
    Mat centers;  // n x m
    Vec scales;
    Vec offsets;
};

GallagherBasins make_basins(int n) {
    GallagherBasins b;
    b.centers.resize(n, kGallagherPeaks);
    b.scales.resize(kGallagherPeaks);
    b.offsets.resize(kGallagherPeaks);
    Rng rng(seed_mix(0x67616c6cULL, static_cast<std::uint64_t>(n)));
    for (int j = 0; j < kGallagherPeaks; ++j) {
        for (int i = 0; i < n; ++i) b.centers(i, j) = rng.uniform(-4.0, 4.0);
        b.scales(j) = std::pow(10.0, rng.uniform(-1.0, 1.0));
        b.offsets(j) = 1.0 + static_cast<double>(j);
    }
    return b;
}

const GallagherBasins& basins_for(int n) {
    // Dimensions are small integers; a tiny static cache keeps evaluation pure.
    static std::vector<GallagherBasins> cache(64);
    static std::vector<bool> ready(64, false);
    if (n < 64 && ready[static_cast<std::size_t>(n)]) return cache[static_cast<std::size_t>(n)];
    if (n < 64) {
        static std::mutex m;
        std::lock_guard<std::mutex> lock(m);
        if (!ready[static_cast<std::size_t>(n)]) {
            cache[static_cast<std::size_t>(n)] = make_basins(n);
            ready[static_cast<std::size_t>(n)] = true;
        }
        return cache[static_cast<std::size_t>(n)];
    }
    static thread_local GallagherBasins big;
    big = make_basins(n);
    return big;
}

double sq(double v) { return v * v; }

}  // namespace

FunctionGroup group_of(BaseFunction f) {
    switch (f) {
        case BaseFunction::sphere:
        case BaseFunction::ellipsoid:
            return FunctionGroup::separable;
        case BaseFunction::attr_sector:
        case BaseFunction::rosenbrock:
            return FunctionGroup::moderate;
        case BaseFunction::sharp_ridge:
        case BaseFunction::diff_powers:
            return FunctionGroup::illcond;
        case BaseFunction::rastrigin:
        case BaseFunction::schaffer_like:
            return FunctionGroup::multimodal;
        case BaseFunction::griewank_rosenbrock:
        case BaseFunction::gallagher_like:
            return FunctionGroup::weakstructure;
    }
    throw std::logic_error("group_of: bad function id");
}

std::string group_name(FunctionGroup g) {
    switch (g) {
        case FunctionGroup::separable: return "separable";
        case FunctionGroup::moderate: return "moderate";
        case FunctionGroup::illcond: return "ill-cond";
        case FunctionGroup::multimodal: return "multimodal";
        case FunctionGroup::weakstructure: return "weakstructure";
    }
    throw std::logic_error("group_name: bad group");
}

std::string base_function_name(BaseFunction f) {
    switch (f) {
        case BaseFunction::sphere: return "sphere";
        case BaseFunction::ellipsoid: return "ellipsoid";
        case BaseFunction::rastrigin: return "rastrigin";
        case BaseFunction::rosenbrock: return "rosenbrock";
        case BaseFunction::sharp_ridge: return "sharp_ridge";
        case BaseFunction::diff_powers: return "diff_powers";
        case BaseFunction::schaffer_like: return "schaffer_like";
        case BaseFunction::griewank_rosenbrock: return "griewank_rosenbrock";
        case BaseFunction::attr_sector: return "attr_sector";
        case BaseFunction::gallagher_like: return "gallagher_like";
    }
    throw std::logic_error("base_function_name: bad function id");
}

double eval_base(BaseFunction f, const Vec& z) {
    const int n = static_cast<int>(z.size());
    switch (f) {
        case BaseFunction::sphere:
            return z.squaredNorm();
        case BaseFunction::ellipsoid: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                s += std::pow(10.0, 6.0 * i / (n - 1)) * sq(z(i));
            }
            return s;
        }
        case BaseFunction::rastrigin: {
            double c = 0.0;
            for (int i = 0; i < n; ++i) c += std::cos(2.0 * kPi * z(i));
            return 10.0 * (n - c) + z.squaredNorm();
        }
        case BaseFunction::rosenbrock: {
            double s = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                double wi = z(i) + 1.0;
                double wj = z(i + 1) + 1.0;
                s += 100.0 * sq(sq(wi) - wj) + sq(wi - 1.0);
            }
            return s;
        }
        case BaseFunction::sharp_ridge: {
            double tail = 0.0;
            for (int i = 1; i < n; ++i) tail += sq(z(i));
            return sq(z(0)) + 100.0 * std::sqrt(tail);
        }
        case BaseFunction::diff_powers: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                s += std::pow(std::abs(z(i)), 2.0 + 4.0 * i / (n - 1));
            }
            return s;
        }
        case BaseFunction::schaffer_like: {
            double s = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                double si = std::sqrt(sq(z(i)) + sq(z(i + 1)));
                double root = std::sqrt(si);
                s += root + root * sq(std::sin(50.0 * std::pow(si, 0.2)));
            }
            return sq(s / (n - 1));
        }
        case BaseFunction::griewank_rosenbrock: {
            double s = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                double wi = z(i) + 1.0;
                double wj = z(i + 1) + 1.0;
                double r = 100.0 * sq(sq(wi) - wj) + sq(wi - 1.0);
                s += r / 4000.0 - std::cos(r);
            }
            return 10.0 * s / (n - 1) + 10.0;
        }
        case BaseFunction::attr_sector: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                double c = z(i) > 0.0 ? 100.0 : 1.0;
                s += sq(c * z(i));
            }
            return s;
        }
        case BaseFunction::gallagher_like: {
            const auto& b = basins_for(n);
            double best = z.squaredNorm();
            for (int j = 0; j < kGallagherPeaks; ++j) {
                double d = (z - b.centers.col(j)).squaredNorm();
                best = std::min(best, b.offsets(j) + b.scales(j) * d);
            }
            return best;
        }
    }
    throw std::logic_error("eval_base: bad function id");
}

std::pair<BaseFunction, BaseFunction> problem_pair(int k) {
    if (k < 1 || k > kProblemCount) throw std::invalid_argument("problem_pair: k out of range");
    int idx = k - 1;
    for (int a = 0; a < kBaseFunctionCount; ++a) {
        int row = kBaseFunctionCount - a;
        if (idx < row) {
            return {static_cast<BaseFunction>(a), static_cast<BaseFunction>(a + idx)};
        }
        idx -= row;
    }
    throw std::logic_error("problem_pair: enumeration bug");
}

namespace {

bool is_separable(BaseFunction f) {
    return f == BaseFunction::sphere || f == BaseFunction::ellipsoid;
}

Mat random_rotation(int n, Rng& rng) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    }
    return q;
}

}  // namespace

BiObjectiveProblem BiObjectiveProblem::make(int k, int n, int instance) {
    if (k < 1 || k > kProblemCount) throw std::invalid_argument("make: k out of range");
    if (n < 2) throw std::invalid_argument("make: dimension must be >= 2");
    if (instance < 1) throw std::invalid_argument("make: instance must be >= 1");

    BiObjectiveProblem p;
    p.k_ = k;
    p.n_ = n;
    p.instance_ = instance;
    auto [f1, f2] = problem_pair(k);
    p.fn1_ = f1;
    p.fn2_ = f2;

    const std::uint64_t base = seed_mix(0x686d6f70ULL, static_cast<std::uint64_t>(k),
                                        static_cast<std::uint64_t>(n),
                                        static_cast<std::uint64_t>(instance));
    Rng shift_rng(seed_mix(base, 1));
    p.shift1_.resize(n);
    p.shift2_.resize(n);
    for (int i = 0; i < n; ++i) p.shift1_(i) = shift_rng.uniform(-4.0, 4.0);
    for (int i = 0; i < n; ++i) p.shift2_(i) = shift_rng.uniform(-4.0, 4.0);

    if (is_separable(f1)) {
        p.rot1_ = Mat::Identity(n, n);
    } else {
        Rng r1(seed_mix(base, 2));
        p.rot1_ = random_rotation(n, r1);
    }
    if (is_separable(f2)) {
        p.rot2_ = Mat::Identity(n, n);
    } else {
        Rng r2(seed_mix(base, 3));
        p.rot2_ = random_rotation(n, r2);
    }
    return p;
}

ObjectiveVector BiObjectiveProblem::evaluate(const Vec& x) const {
    if (x.size() != n_) throw std::invalid_argument("evaluate: dimension mismatch");
    double g1 = eval_base(fn1_, rot1_ * (x - shift1_));
    double g2 = eval_base(fn2_, rot2_ * (x - shift2_));
    return {g1, g2};
}

ObjectiveVector reference_point(const BiObjectiveProblem& p) {
    ObjectiveVector at_origin = p.evaluate(Vec::Zero(p.dim()));
    return {1.1 * at_origin.f1, 1.1 * at_origin.f2};
}

double bisphere_ref_hv(const BiObjectiveProblem& p) {
    if (p.fn1() != BaseFunction::sphere || p.fn2() != BaseFunction::sphere) {
        throw std::invalid_argument("bisphere_ref_hv: not a sphere-sphere problem");
    }
    // The Pareto front is f2 = (sqrt(D) - sqrt(f1))^2 for f1 in [0, D], with
    // D the squared distance between the two optima.
    const double d = (p.shift1() - p.shift2()).squaredNorm();
    const ObjectiveVector ref = reference_point(p);
    const double r1 = ref.f1;
    const double r2 = ref.f2;
    if (r1 <= 0.0 || r2 <= 0.0) return 0.0;

    double sd = std::sqrt(d);
    double a = 0.0;
    if (r2 < d) {
        double t = sd - std::sqrt(r2);
        a = t * t;
    }
    double b = std::min(r1, d);
    auto antider = [&](double u) {
        // integral of (sqrt(D) - sqrt(u))^2 du
        return d * u - (4.0 / 3.0) * sd * std::pow(u, 1.5) + 0.5 * u * u;
    };
    double hv = 0.0;
    if (b > a) hv += r2 * (b - a) - (antider(b) - antider(a));
    if (r1 > d) hv += (r1 - d) * r2;
    return hv;
}

std::string reference_file_name(int k, int n, int instance) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "k%d_n%d_i%d.ref", k, n, instance);
    return buf;
}

ReferenceData reference_data(const BiObjectiveProblem& p, const std::string& ref_dir) {
    ReferenceData rd;
    rd.ref_point = reference_point(p);
    if (p.fn1() == BaseFunction::sphere && p.fn2() == BaseFunction::sphere) {
        rd.ref_hv = bisphere_ref_hv(p);
        rd.source = ReferenceData::Source::analytic;
        return rd;
    }

    const std::string path =
        ref_dir + "/" + reference_file_name(p.k(), p.dim(), p.instance());
    std::ifstream in(path);
    if (!in) {
        throw NoReferenceError("no reference for problem k=" + std::to_string(p.k()) +
                               " n=" + std::to_string(p.dim()) +
                               " i=" + std::to_string(p.instance()) + " (looked for " + path +
                               ")");
    }
    std::string line;
    if (!std::getline(in, line)) throw NoReferenceError("empty reference file: " + path);
    {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag >> rd.ref_point.f1 >> rd.ref_point.f2) || tag != "ref_point") {
            throw NoReferenceError("malformed reference header in " + path);
        }
    }
    std::vector<ObjectiveVector> front;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ObjectiveVector v;
        long long idx = 0;
        if (!(ls >> v.f1 >> v.f2 >> idx)) {
            throw NoReferenceError("malformed reference line in " + path + ": " + line);
        }
        front.push_back(v);
    }
    rd.ref_hv = hv2d(front, rd.ref_point);
    rd.source = ReferenceData::Source::long_run;
    return rd;
}

void write_reference_file(const std::string& path, const ObjectiveVector& ref_point,
                          const ParetoArchive& archive) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write reference file: " + path);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ref_point %.17g %.17g\n", ref_point.f1, ref_point.f2);
    out << buf;
    archive.write(out);
}

}  // namespace hmo
