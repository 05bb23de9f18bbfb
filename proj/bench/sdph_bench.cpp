// Kernel benchmark: OpenMP-parallel transforms against their serial
// reference implementations on a vessel phantom.

#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdph/cubical.hpp"
#include "sdph/phantom.hpp"
#include "sdph/sdt.hpp"
#include "sdph/texture_global.hpp"

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return static_cast<double>(clock()) / CLOCKS_PER_SEC;
#endif
}

template <typename F>
double time_once(F&& fn) {
  const double t0 = now();
  fn();
  return now() - t0;
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  int side = 64;
  if (argc > 1) side = std::atoi(argv[1]);
#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
#endif

  const sdph::GridDims dims{side, side, side};
  const auto spec =
      sdph::default_phantom_spec(sdph::PhantomClass::ThinDense, dims, 7);
  const sdph::BinaryVolume vol = sdph::make_vessel_network(spec);

  std::printf("volume %dx%dx%d, %zu occupied, max threads %d\n", side, side,
              side, vol.occupied_count(), max_threads);

  set_threads(1);
  const double t_sdt_serial =
      time_once([&] { (void)sdph::signed_distance(vol); });
  set_threads(max_threads);
  const double t_sdt_par = time_once([&] { (void)sdph::signed_distance(vol); });
  std::printf("signed_distance      serial %8.3f s   parallel %8.3f s   x%.2f\n",
              t_sdt_serial, t_sdt_par, t_sdt_serial / t_sdt_par);

  if (side <= 24) {
    const double t_bf =
        time_once([&] { (void)sdph::signed_distance_bruteforce(vol); });
    std::printf("sdt bruteforce ref   %8.3f s\n", t_bf);
  }

  const sdph::ScalarField field = sdph::signed_distance(vol);

  set_threads(1);
  const double t_ph_serial = time_once(
      [&] { (void)sdph::persistence_chunked(field, sdph::ChunkGrid{2, 2, 2}); });
  set_threads(max_threads);
  const double t_ph_par = time_once(
      [&] { (void)sdph::persistence_chunked(field, sdph::ChunkGrid{2, 2, 2}); });
  std::printf("persistence_chunked  serial %8.3f s   parallel %8.3f s   x%.2f\n",
              t_ph_serial, t_ph_par, t_ph_serial / t_ph_par);

  // KDE over a dense grid from the PH1 points of the full diagram.
  const sdph::Diagram dg = sdph::persistence(field);
  std::vector<sdph::WeightedPoint> pts;
  for (const auto& p : dg.points)
    if (!p.essential && p.degree == 1)
      pts.push_back({p.birth, p.death, p.persistence()});
  if (!pts.empty()) {
    const sdph::DensityBounds bounds{-8.0, 8.0, -8.0, 8.0};
    set_threads(1);
    const double t_kde_serial = time_once(
        [&] { (void)sdph::kde(pts, bounds, sdph::DensityResolution{512, 512}); });
    set_threads(max_threads);
    const double t_kde_par = time_once(
        [&] { (void)sdph::kde(pts, bounds, sdph::DensityResolution{512, 512}); });
    std::printf("kde 512x512          serial %8.3f s   parallel %8.3f s   x%.2f\n",
                t_kde_serial, t_kde_par, t_kde_serial / t_kde_par);
  }
  return 0;
}
