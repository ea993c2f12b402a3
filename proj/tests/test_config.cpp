// Copyright (C) 2026 The actionprop authors
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <stdexcept>

#include <doctest.h>

#include "actionprop/config.hpp"
#include "helpers.hpp"

using namespace actionprop;

TEST_SUITE("config") {

TEST_CASE("the default configuration is valid and self-consistent") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.eta_o == 0.3);
    CHECK(cfg.eta_f == 0.5);
    CHECK(cfg.eta_p == 0.3);
    CHECK(cfg.pool_size == 50);
    CHECK(cfg.max_paths == 12);
    CHECK(cfg.min_path_duration == 10);
    CHECK(cfg.min_proposal_duration == 20);
    CHECK(cfg.max_gap == 30);
    CHECK(cfg.eval_eta == 0.5);

    // The derived views carry the same numbers.
    CHECK(cfg.linkConfig().eta_o == 0.3);
    CHECK(cfg.searchConfig().pool_size == 50);
    CHECK(cfg.assocConfig().max_paths == 12);
    CHECK(cfg.assocConfig().use_similarity);
    CHECK(cfg.trackBuildConfig().appearance_gate == 0.5);
    CHECK(cfg.completionConfig().max_gap == 30);
    CHECK(cfg.completionConfig().window.scales.size() == 5);
    CHECK(cfg.emitConfig().min_duration == 20);
    CHECK_FALSE(cfg.emitConfig().strict);
}

TEST_CASE("json round-trip preserves every field it writes") {
    PipelineConfig cfg;
    cfg.lambda_p = 0.5;
    cfg.gmm_components = 3;
    cfg.gmm_seed = 99;
    cfg.eta_o = 0.4;
    cfg.pool_size = 30;
    cfg.max_paths = 7;
    cfg.use_similarity = false;
    cfg.scales = {0.9, 1.0, 1.1};
    cfg.strict_duration = true;
    cfg.classifier.epochs = 12;
    cfg.seed = 123;

    const auto restored = PipelineConfig::fromJson(cfg.toJson());
    CHECK(restored.lambda_p == 0.5);
    CHECK(restored.gmm_components == 3);
    CHECK(restored.gmm_seed == 99);
    CHECK(restored.eta_o == 0.4);
    CHECK(restored.pool_size == 30);
    CHECK(restored.max_paths == 7);
    CHECK_FALSE(restored.use_similarity);
    CHECK(restored.scales == std::vector<double>{0.9, 1.0, 1.1});
    CHECK(restored.strict_duration);
    CHECK(restored.classifier.epochs == 12);
    CHECK(restored.seed == 123);
    CHECK(restored.toJson() == cfg.toJson());
}

TEST_CASE("partial json keeps defaults for omitted keys") {
    const auto cfg = PipelineConfig::fromJson(R"({"eta_o": 0.45, "max_paths": 4})");
    CHECK(cfg.eta_o == 0.45);
    CHECK(cfg.max_paths == 4);
    CHECK(cfg.pool_size == 50);           // untouched default
    CHECK(cfg.min_proposal_duration == 20);
}

TEST_CASE("validation pins the documented ranges") {
    PipelineConfig cfg;

    SUBCASE("max_paths bounded by the pool") {
        cfg.max_paths = 60;
        CHECK_THROWS_WITH_AS(cfg.validate(), "config: max_paths must not exceed pool_size",
                             std::invalid_argument);
    }
    SUBCASE("eta_o range") {
        cfg.eta_o = 1.5;
        CHECK_THROWS_WITH_AS(cfg.validate(), "config: eta_o must lie in [0,1]",
                             std::invalid_argument);
    }
    SUBCASE("positive durations") {
        cfg.min_proposal_duration = 0;
        CHECK_THROWS_WITH_AS(cfg.validate(), "config: durations must be positive",
                             std::invalid_argument);
    }
    SUBCASE("region scale") {
        cfg.region_scale = 0.9;
        CHECK_THROWS_WITH_AS(cfg.validate(), "config: region_scale must be >= 1",
                             std::invalid_argument);
    }
    SUBCASE("scales present and positive") {
        cfg.scales.clear();
        CHECK_THROWS_WITH_AS(cfg.validate(), "config: scales must be non-empty",
                             std::invalid_argument);
        cfg.scales = {1.0, -0.5};
        CHECK_THROWS_WITH_AS(cfg.validate(), "config: scales must be positive",
                             std::invalid_argument);
    }
    SUBCASE("negative lambda") {
        cfg.lambda_p = -0.1;
        CHECK_THROWS_WITH_AS(cfg.validate(), "config: lambda weights must be non-negative",
                             std::invalid_argument);
    }
}

TEST_CASE("file loading reports missing files and parse failures") {
    testutil::TempDir dir;
    CHECK_THROWS_AS(PipelineConfig::fromFile(dir.file("absent.json")), std::invalid_argument);

    {
        std::ofstream out(dir.file("broken.json"));
        out << "{ nope";
    }
    CHECK_THROWS_AS(PipelineConfig::fromFile(dir.file("broken.json")), std::invalid_argument);

    {
        std::ofstream out(dir.file("good.json"));
        out << R"({"pool_size": 10, "max_paths": 5})";
    }
    const auto cfg = PipelineConfig::fromFile(dir.file("good.json"));
    CHECK(cfg.pool_size == 10);
    CHECK(cfg.max_paths == 5);
}

}  // TEST_SUITE
