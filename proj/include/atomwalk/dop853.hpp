#pragma once

// Adaptive explicit Runge-Kutta 8(5,3) pair of Dormand and Prince with the
// seventh-order continuous extension (Hairer, Norsett & Wanner, "Solving
// Ordinary Differential Equations I", DOP853). Autonomous systems only.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "atomwalk/error.hpp"

namespace atomwalk {

namespace dop853_detail {


inline constexpr double b1 = 5.42937341165687622380535766363E-2;
inline constexpr double b6 = 4.45031289275240888144113950566E0;
inline constexpr double b7 = 1.89151789931450038304281599044E0;
inline constexpr double b8 = -5.8012039600105847814672114227E0;
inline constexpr double b9 = 3.1116436695781989440891606237E-1;
inline constexpr double b10 = -1.52160949662516078556178806805E-1;
inline constexpr double b11 = 2.01365400804030348374776537501E-1;
inline constexpr double b12 = 4.47106157277725905176885569043E-2;

inline constexpr double bhh1 = 0.244094488188976377952755905512E+00;
inline constexpr double bhh2 = 0.733846688281611857341361741547E+00;
inline constexpr double bhh3 = 0.220588235294117647058823529412E-01;

inline constexpr double er1 = 0.1312004499419488073250102996E-01;
inline constexpr double er6 = -0.1225156446376204440720569753E+01;
inline constexpr double er7 = -0.4957589496572501915214079952E+00;
inline constexpr double er8 = 0.1664377182454986536961530415E+01;
inline constexpr double er9 = -0.3503288487499736816886487290E+00;
inline constexpr double er10 = 0.3341791187130174790297318841E+00;
inline constexpr double er11 = 0.8192320648511571246570742613E-01;
inline constexpr double er12 = -0.2235530786388629525884427845E-01;

inline constexpr double a21 = 5.26001519587677318785587544488E-2;
inline constexpr double a31 = 1.97250569845378994544595329183E-2;
inline constexpr double a32 = 5.91751709536136983633785987549E-2;
inline constexpr double a41 = 2.95875854768068491816892993775E-2;
inline constexpr double a43 = 8.87627564304205475450678981324E-2;
inline constexpr double a51 = 2.41365134159266685502369798665E-1;
inline constexpr double a53 = -8.84549479328286085344864962717E-1;
inline constexpr double a54 = 9.24834003261792003115737966543E-1;
inline constexpr double a61 = 3.7037037037037037037037037037E-2;
inline constexpr double a64 = 1.70828608729473871279604482173E-1;
inline constexpr double a65 = 1.25467687566822425016691814123E-1;
inline constexpr double a71 = 3.7109375E-2;
inline constexpr double a74 = 1.70252211019544039314978060272E-1;
inline constexpr double a75 = 6.02165389804559606850219397283E-2;
inline constexpr double a76 = -1.7578125E-2;
inline constexpr double a81 = 3.70920001185047927108779319836E-2;
inline constexpr double a84 = 1.70383925712239993810214054705E-1;
inline constexpr double a85 = 1.07262030446373284651809199168E-1;
inline constexpr double a86 = -1.53194377486244017527936158236E-2;
inline constexpr double a87 = 8.27378916381402288758473766002E-3;
inline constexpr double a91 = 6.24110958716075717114429577812E-1;
inline constexpr double a94 = -3.36089262944694129406857109825E0;
inline constexpr double a95 = -8.68219346841726006818189891453E-1;
inline constexpr double a96 = 2.75920996994467083049415600797E1;
inline constexpr double a97 = 2.01540675504778934086186788979E1;
inline constexpr double a98 = -4.34898841810699588477366255144E1;
inline constexpr double a101 = 4.77662536438264365890433908527E-1;
inline constexpr double a104 = -2.48811461997166764192642586468E0;
inline constexpr double a105 = -5.90290826836842996371446475743E-1;
inline constexpr double a106 = 2.12300514481811942347288949897E1;
inline constexpr double a107 = 1.52792336328824235832596922938E1;
inline constexpr double a108 = -3.32882109689848629194453265587E1;
inline constexpr double a109 = -2.03312017085086261358222928593E-2;
inline constexpr double a111 = -9.3714243008598732571704021658E-1;
inline constexpr double a114 = 5.18637242884406370830023853209E0;
inline constexpr double a115 = 1.09143734899672957818500254654E0;
inline constexpr double a116 = -8.14978701074692612513997267357E0;
inline constexpr double a117 = -1.85200656599969598641566180701E1;
inline constexpr double a118 = 2.27394870993505042818970056734E1;
inline constexpr double a119 = 2.49360555267965238987089396762E0;
inline constexpr double a1110 = -3.0467644718982195003823669022E0;
inline constexpr double a121 = 2.27331014751653820792359768449E0;
inline constexpr double a124 = -1.05344954667372501984066689879E1;
inline constexpr double a125 = -2.00087205822486249909675718444E0;
inline constexpr double a126 = -1.79589318631187989172765950534E1;
inline constexpr double a127 = 2.79488845294199600508499808837E1;
inline constexpr double a128 = -2.85899827713502369474065508674E0;
inline constexpr double a129 = -8.87285693353062954433549289258E0;
inline constexpr double a1210 = 1.23605671757943030647266201528E1;
inline constexpr double a1211 = 6.43392746015763530355970484046E-1;

inline constexpr double a141 = 5.61675022830479523392909219681E-2;
inline constexpr double a147 = 2.53500210216624811088794765333E-1;
inline constexpr double a148 = -2.46239037470802489917441475441E-1;
inline constexpr double a149 = -1.24191423263816360469010140626E-1;
inline constexpr double a1410 = 1.5329179827876569731206322685E-1;
inline constexpr double a1411 = 8.20105229563468988491666602057E-3;
inline constexpr double a1412 = 7.56789766054569976138603589584E-3;
inline constexpr double a1413 = -8.298E-3;
inline constexpr double a151 = 3.18346481635021405060768473261E-2;
inline constexpr double a156 = 2.83009096723667755288322961402E-2;
inline constexpr double a157 = 5.35419883074385676223797384372E-2;
inline constexpr double a158 = -5.49237485713909884646569340306E-2;
inline constexpr double a1511 = -1.08347328697249322858509316994E-4;
inline constexpr double a1512 = 3.82571090835658412954920192323E-4;
inline constexpr double a1513 = -3.40465008687404560802977114492E-4;
inline constexpr double a1514 = 1.41312443674632500278074618366E-1;
inline constexpr double a161 = -4.28896301583791923408573538692E-1;
inline constexpr double a166 = -4.69762141536116384314449447206E0;
inline constexpr double a167 = 7.68342119606259904184240953878E0;
inline constexpr double a168 = 4.06898981839711007970213554331E0;
inline constexpr double a169 = 3.56727187455281109270669543021E-1;
inline constexpr double a1613 = -1.39902416515901462129418009734E-3;
inline constexpr double a1614 = 2.9475147891527723389556272149E0;
inline constexpr double a1615 = -9.15095847217987001081870187138E0;

inline constexpr double d41 = -0.84289382761090128651353491142E+01;
inline constexpr double d46 = 0.56671495351937776962531783590E+00;
inline constexpr double d47 = -0.30689499459498916912797304727E+01;
inline constexpr double d48 = 0.23846676565120698287728149680E+01;
inline constexpr double d49 = 0.21170345824450282767155149946E+01;
inline constexpr double d410 = -0.87139158377797299206789907490E+00;
inline constexpr double d411 = 0.22404374302607882758541771650E+01;
inline constexpr double d412 = 0.63157877876946881815570249290E+00;
inline constexpr double d413 = -0.88990336451333310820698117400E-01;
inline constexpr double d414 = 0.18148505520854727256656404962E+02;
inline constexpr double d415 = -0.91946323924783554000451984436E+01;
inline constexpr double d416 = -0.44360363875948939664310572000E+01;
inline constexpr double d51 = 0.10427508642579134603413151009E+02;
inline constexpr double d56 = 0.24228349177525818288430175319E+03;
inline constexpr double d57 = 0.16520045171727028198505394887E+03;
inline constexpr double d58 = -0.37454675472269020279518312152E+03;
inline constexpr double d59 = -0.22113666853125306036270938578E+02;
inline constexpr double d510 = 0.77334326684722638389603898808E+01;
inline constexpr double d511 = -0.30674084731089398182061213626E+02;
inline constexpr double d512 = -0.93321305264302278729567221706E+01;
inline constexpr double d513 = 0.15697238121770843886131091075E+02;
inline constexpr double d514 = -0.31139403219565177677282850411E+02;
inline constexpr double d515 = -0.93529243588444783865713862664E+01;
inline constexpr double d516 = 0.35816841486394083752465898540E+02;
inline constexpr double d61 = 0.19985053242002433820987653617E+02;
inline constexpr double d66 = -0.38703730874935176555105901742E+03;
inline constexpr double d67 = -0.18917813819516756882830838328E+03;
inline constexpr double d68 = 0.52780815920542364900561016686E+03;
inline constexpr double d69 = -0.11573902539959630126141871134E+02;
inline constexpr double d610 = 0.68812326946963000169666922661E+01;
inline constexpr double d611 = -0.10006050966910838403183860980E+01;
inline constexpr double d612 = 0.77771377980534432092869265740E+00;
inline constexpr double d613 = -0.27782057523535084065932004339E+01;
inline constexpr double d614 = -0.60196695231264120758267380846E+02;
inline constexpr double d615 = 0.84320405506677161018159903784E+02;
inline constexpr double d616 = 0.11992291136182789328035130030E+02;
inline constexpr double d71 = -0.25693933462703749003312586129E+02;
inline constexpr double d76 = -0.15418974869023643374053993627E+03;
inline constexpr double d77 = -0.23152937917604549567536039109E+03;
inline constexpr double d78 = 0.35763911791061412378285349910E+03;
inline constexpr double d79 = 0.93405324183624310003907691704E+02;
inline constexpr double d710 = -0.37458323136451633156875139351E+02;
inline constexpr double d711 = 0.10409964950896230045147246184E+03;
inline constexpr double d712 = 0.29840293426660503123344363579E+02;
inline constexpr double d713 = -0.43533456590011143754432175058E+02;
inline constexpr double d714 = 0.96324553959188282948394950600E+02;
inline constexpr double d715 = -0.39177261675615439165231486172E+02;
inline constexpr double d716 = -0.14972683625798562581422125276E+03;

}  // namespace dop853_detail

/// Stepper for y' = f(y) with y in R^N. `Rhs` is callable as
/// `f(const double* y, double* dy)`. The stepper owns its whole workspace, so
/// one instance per trajectory is safe under concurrency.
///
/// Usage: reset(), then repeatedly step(); after each accepted step the
/// interval [t_prev(), t()] is covered by the continuous extension `dense()`.
template <std::size_t N, class Rhs>
class Dop853 {
 public:
  using Vec = std::array<double, N>;

  Dop853(Rhs f, double rtol, double atol, double max_step)
      : f_(std::move(f)), rtol_(rtol), atol_(atol), max_step_(max_step) {}

  /// Starts a new integration at (t0, y0). `direction` is +1 or -1.
  void reset(const Vec& y0, double t0, double direction = 1.0) {
    y_ = y0;
    t_ = t0;
    t_prev_ = t0;
    y_prev_ = y0;
    dir_ = direction >= 0.0 ? 1.0 : -1.0;
    f_(y_.data(), k1_.data());
    ++n_eval_;
    h_ = initial_step();
    reject_ = false;
    dense_ready_ = false;
    n_accepted_ = 0;
    n_rejected_ = 0;
  }

  /// Replaces the current state without moving in time (used after an
  /// external rescaling of part of the state). Keeps the step-size history.
  void replace_state(const Vec& y) {
    y_ = y;
    f_(y_.data(), k1_.data());
    ++n_eval_;
    dense_ready_ = false;
  }

  /// Advances by one accepted step whose magnitude does not exceed `limit`
  /// (> 0). Returns the signed size of the accepted step. Throws
  /// Error("step-underflow") when the step size collapses.
  double step(double limit) {
    using namespace dop853_detail;
    constexpr double uround = std::numeric_limits<double>::epsilon();
    constexpr double fac1 = 1.0 / 3.0, fac2 = 6.0, safe = 0.9;
    constexpr double expo1 = 1.0 / 8.0;

    limit = std::min(limit, max_step_);
    while (true) {
      double h = h_;
      if (std::abs(h) > limit) h = dir_ * limit;
      if (0.1 * std::abs(h) <= std::abs(t_) * uround || std::abs(h) < std::numeric_limits<double>::min()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "step size " << h << " underflowed at tau = " << t_;
        throw Error("step-underflow", msg.str());
      }

      stages(h);
      const double err = std::abs(h) * error_estimate();
      const double fac11 = std::pow(err, expo1);
      const double fac = std::clamp(fac11 / safe, 1.0 / fac2, 1.0 / fac1);
      double hnew = h / fac;

      if (err <= 1.0) {
        ++n_accepted_;
        // k4 <- f(y_new); k5 holds y_new
        f_(k5_.data(), k4_.data());
        ++n_eval_;

        y_prev_ = y_;
        t_prev_ = t_;
        h_used_ = h;
        // Keep stage data for the continuous extension until the next step.
        std::swap(k1_prev_, k1_);
        k1_ = k4_;
        k2s_ = k2_;
        k3s_ = k3_;
        k4s_ = k4_;
        k6s_ = k6_;
        k7s_ = k7_;
        k8s_ = k8_;
        k9s_ = k9_;
        k10s_ = k10_;
        y_ = k5_;
        t_ = t_prev_ + h;
        dense_ready_ = false;

        if (std::abs(hnew) > max_step_) hnew = dir_ * max_step_;
        if (reject_) hnew = dir_ * std::min(std::abs(hnew), std::abs(h));
        reject_ = false;
        h_ = hnew;
        return h;
      }
      hnew = h / std::min(1.0 / fac1, fac11 / safe);
      reject_ = true;
      if (n_accepted_ >= 1) ++n_rejected_;
      h_ = hnew;
    }
  }

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  const Vec& y() const { return y_; }
  const Vec& y_prev() const { return y_prev_; }
  std::size_t accepted_steps() const { return n_accepted_; }
  std::size_t rejected_steps() const { return n_rejected_; }
  std::size_t rhs_evaluations() const { return n_eval_; }

  /// Seventh-order continuous extension over the last accepted step.
  Vec dense(double t) {
    prepare_dense();
    Vec out;
    for (std::size_t i = 0; i < N; ++i) out[i] = dense_component(i, t);
    return out;
  }

  double dense_component(std::size_t i, double t) {
    prepare_dense();
    const double s = (t - t_prev_) / h_used_;
    const double s1 = 1.0 - s;
    return rc1_[i] +
           s * (rc2_[i] +
                s1 * (rc3_[i] + s * (rc4_[i] + s1 * (rc5_[i] + s * (rc6_[i] + s1 * (rc7_[i] + s * rc8_[i]))))));
  }

 private:
  void stages(double h) {
    using namespace dop853_detail;
    const Vec& w = y_;
    for (std::size_t i = 0; i < N; ++i) ww_[i] = w[i] + h * a21 * k1_[i];
    f_(ww_.data(), k2_.data());
    for (std::size_t i = 0; i < N; ++i) ww_[i] = w[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    f_(ww_.data(), k3_.data());
    for (std::size_t i = 0; i < N; ++i) ww_[i] = w[i] + h * (a41 * k1_[i] + a43 * k3_[i]);
    f_(ww_.data(), k4_.data());
    for (std::size_t i = 0; i < N; ++i) ww_[i] = w[i] + h * (a51 * k1_[i] + a53 * k3_[i] + a54 * k4_[i]);
    f_(ww_.data(), k5_.data());
    for (std::size_t i = 0; i < N; ++i) ww_[i] = w[i] + h * (a61 * k1_[i] + a64 * k4_[i] + a65 * k5_[i]);
    f_(ww_.data(), k6_.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a71 * k1_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    f_(ww_.data(), k7_.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a81 * k1_[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] + a87 * k7_[i]);
    f_(ww_.data(), k8_.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a91 * k1_[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] + a97 * k7_[i] + a98 * k8_[i]);
    f_(ww_.data(), k9_.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a101 * k1_[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] + a107 * k7_[i] +
                           a108 * k8_[i] + a109 * k9_[i]);
    f_(ww_.data(), k10_.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a111 * k1_[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] + a117 * k7_[i] +
                           a118 * k8_[i] + a119 * k9_[i] + a1110 * k10_[i]);
    f_(ww_.data(), k2_.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a121 * k1_[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] + a127 * k7_[i] +
                           a128 * k8_[i] + a129 * k9_[i] + a1210 * k10_[i] + a1211 * k2_[i]);
    f_(ww_.data(), k3_.data());
    n_eval_ += 11;
    for (std::size_t i = 0; i < N; ++i) {
      k4_[i] = b1 * k1_[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] + b10 * k10_[i] + b11 * k2_[i] +
               b12 * k3_[i];
      k5_[i] = w[i] + h * k4_[i];
    }
  }

  // Mixed fifth/third order error norm, scaled so that <= 1 means accept
  // (still to be multiplied by |h|).
  double error_estimate() const {
    using namespace dop853_detail;
    double err = 0.0, err2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = 1.0 / (atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(k5_[i])));
      double sqr = (k4_[i] - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k3_[i]) * sk;
      err2 += sqr * sqr;
      sqr = (er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] + er10 * k10_[i] +
             er11 * k2_[i] + er12 * k3_[i]) *
            sk;
      err += sqr * sqr;
    }
    const double deno = err + 0.01 * err2;
    return err * std::sqrt(1.0 / (deno <= 0.0 ? static_cast<double>(N) : deno * static_cast<double>(N)));
  }

  double initial_step() {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = atol_ + rtol_ * std::abs(y_[i]);
      dnf += (k1_[i] / sk) * (k1_[i] / sk);
      dny += (y_[i] / sk) * (y_[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, max_step_) * dir_;

    for (std::size_t i = 0; i < N; ++i) ww_[i] = y_[i] + h * k1_[i];
    f_(ww_.data(), k2_.data());
    ++n_eval_;
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sqr = (k2_[i] - k1_[i]) / (atol_ + rtol_ * std::abs(y_[i]));
      der2 += sqr * sqr;
    }
    der2 = std::sqrt(der2) / std::abs(h);
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.125);
    return std::min({100.0 * std::abs(h), h1, max_step_}) * dir_;
  }

  void prepare_dense() {
    using namespace dop853_detail;
    if (dense_ready_) return;
    const double h = h_used_;
    const Vec& w = y_prev_;
    const Vec& k1 = k1_prev_;
    const Vec& k4 = k4s_;  // f(y_new)
    Vec e10, e2, e3;
    for (std::size_t i = 0; i < N; ++i) {
      rc1_[i] = w[i];
      const double ydiff = y_[i] - w[i];
      rc2_[i] = ydiff;
      const double bspl = h * k1[i] - ydiff;
      rc3_[i] = bspl;
      rc4_[i] = ydiff - h * k4[i] - bspl;
      rc5_[i] = d41 * k1[i] + d46 * k6s_[i] + d47 * k7s_[i] + d48 * k8s_[i] + d49 * k9s_[i] + d410 * k10s_[i] +
                d411 * k2s_[i] + d412 * k3s_[i];
      rc6_[i] = d51 * k1[i] + d56 * k6s_[i] + d57 * k7s_[i] + d58 * k8s_[i] + d59 * k9s_[i] + d510 * k10s_[i] +
                d511 * k2s_[i] + d512 * k3s_[i];
      rc7_[i] = d61 * k1[i] + d66 * k6s_[i] + d67 * k7s_[i] + d68 * k8s_[i] + d69 * k9s_[i] + d610 * k10s_[i] +
                d611 * k2s_[i] + d612 * k3s_[i];
      rc8_[i] = d71 * k1[i] + d76 * k6s_[i] + d77 * k7s_[i] + d78 * k8s_[i] + d79 * k9s_[i] + d710 * k10s_[i] +
                d711 * k2s_[i] + d712 * k3s_[i];
    }
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a141 * k1[i] + a147 * k7s_[i] + a148 * k8s_[i] + a149 * k9s_[i] + a1410 * k10s_[i] +
                           a1411 * k2s_[i] + a1412 * k3s_[i] + a1413 * k4[i]);
    f_(ww_.data(), e10.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a151 * k1[i] + a156 * k6s_[i] + a157 * k7s_[i] + a158 * k8s_[i] + a1511 * k2s_[i] +
                           a1512 * k3s_[i] + a1513 * k4[i] + a1514 * e10[i]);
    f_(ww_.data(), e2.data());
    for (std::size_t i = 0; i < N; ++i)
      ww_[i] = w[i] + h * (a161 * k1[i] + a166 * k6s_[i] + a167 * k7s_[i] + a168 * k8s_[i] + a169 * k9s_[i] +
                           a1613 * k4[i] + a1614 * e10[i] + a1615 * e2[i]);
    f_(ww_.data(), e3.data());
    n_eval_ += 3;
    for (std::size_t i = 0; i < N; ++i) {
      rc5_[i] = h * (rc5_[i] + d413 * k4[i] + d414 * e10[i] + d415 * e2[i] + d416 * e3[i]);
      rc6_[i] = h * (rc6_[i] + d513 * k4[i] + d514 * e10[i] + d515 * e2[i] + d516 * e3[i]);
      rc7_[i] = h * (rc7_[i] + d613 * k4[i] + d614 * e10[i] + d615 * e2[i] + d616 * e3[i]);
      rc8_[i] = h * (rc8_[i] + d713 * k4[i] + d714 * e10[i] + d715 * e2[i] + d716 * e3[i]);
    }
    dense_ready_ = true;
  }

  Rhs f_;
  double rtol_, atol_, max_step_;
  double dir_ = 1.0;
  double t_ = 0.0, t_prev_ = 0.0;
  double h_ = 0.0, h_used_ = 0.0;
  bool reject_ = false;
  bool dense_ready_ = false;
  std::size_t n_accepted_ = 0, n_rejected_ = 0, n_eval_ = 0;

  Vec y_{}, y_prev_{}, ww_{};
  Vec k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, k8_{}, k9_{}, k10_{};
  // Stage values of the last accepted step, kept for the continuous extension.
  Vec k1_prev_{}, k2s_{}, k3s_{}, k4s_{}, k6s_{}, k7s_{}, k8s_{}, k9s_{}, k10s_{};
  Vec rc1_{}, rc2_{}, rc3_{}, rc4_{}, rc5_{}, rc6_{}, rc7_{}, rc8_{};
};

}  // namespace atomwalk
