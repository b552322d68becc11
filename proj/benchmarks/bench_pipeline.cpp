#include <benchmark/benchmark.h>

#include "ubf/ingest.hpp"
#include "ubf/labeling.hpp"
#include "ubf/raster.hpp"
#include "ubf/spatial_index.hpp"
#include "ubf/synth.hpp"

namespace {

ubf::SynthConfig scaled_config(int buildings_per_zone) {
  ubf::SynthConfig config;
  config.seed = 77;
  config.buildings_per_zone = buildings_per_zone;
  config.pois_per_building = 2.0;
  config.poi_noise_rate = 0.15;
  config.poi_jitter = 6.0;
  const double size = 800.0;
  const double gap = 200.0;
  int zi = 0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      ubf::ZoneSpec zone;
      zone.rect = {c * (size + gap), r * (size + gap), c * (size + gap) + size,
                   r * (size + gap) + size};
      zone.truth = ubf::kAllClasses[zi++ % ubf::kNumClasses];
      config.zones.push_back(zone);
    }
  }
  return config;
}

ubf::Scene prepared_scene(int buildings_per_zone) {
  auto [scene, truth] = ubf::generate_scene(scaled_config(buildings_per_zone));
  ubf::compute_block_frequencies(scene);
  return scene;
}

void BM_Stage1(benchmark::State& state) {
  const ubf::Scene scene = prepared_scene(static_cast<int>(state.range(0)));
  const ubf::Stage1Params params;
  for (auto _ : state) {
    auto labels = ubf::stage1_candidate_labels(scene, params, 4);
    benchmark::DoNotOptimize(labels);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scene.buildings.size()));
}
BENCHMARK(BM_Stage1)->Arg(250)->Arg(1000)->Arg(4000);

void BM_Stage2(benchmark::State& state) {
  const ubf::Scene scene = prepared_scene(static_cast<int>(state.range(0)));
  const auto labels = ubf::stage1_candidate_labels(scene, ubf::Stage1Params{}, 4);
  const ubf::Stage2Params params;
  for (auto _ : state) {
    auto result = ubf::stage2_refine(labels, scene, params, 4);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scene.buildings.size()));
}
BENCHMARK(BM_Stage2)->Arg(250)->Arg(1000)->Arg(4000);

void BM_KnnQuery(benchmark::State& state) {
  const ubf::Scene scene = prepared_scene(static_cast<int>(state.range(0)));
  std::vector<ubf::Point> centroids;
  centroids.reserve(scene.buildings.size());
  for (const auto& b : scene.buildings) centroids.push_back(b.centroid);
  const ubf::PointIndex index = ubf::PointIndex::build(centroids);
  std::size_t i = 0;
  for (auto _ : state) {
    auto nn = index.k_nearest(centroids[i++ % centroids.size()], 7);
    benchmark::DoNotOptimize(nn);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KnnQuery)->Arg(1000)->Arg(4000);

void BM_KdeDensity(benchmark::State& state) {
  const ubf::Scene scene = prepared_scene(250);
  std::vector<ubf::Point> points;
  for (const auto& p : scene.pois) points.push_back(p.location);
  ubf::KdeParams params;
  params.bandwidth = 60.0;
  params.cell_size = static_cast<double>(state.range(0));
  const ubf::BoundingBox extent = scene.extent.padded(4.0 * params.bandwidth);
  for (auto _ : state) {
    auto raster =
        ubf::kde_density(points, params, extent, ubf::FunctionClass::Residential, 4);
    benchmark::DoNotOptimize(raster);
  }
}
BENCHMARK(BM_KdeDensity)->Arg(40)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
