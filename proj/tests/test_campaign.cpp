#include <catch2/catch_amalgamated.hpp>

#include "dyadic/campaign.hpp"

using namespace dyadic;

TEST_CASE("generator specs parse") {
    CHECK(parse_generator_spec("zero").kind == GeneratorSpec::Kind::Zero);
    CHECK(parse_generator_spec("log").kind == GeneratorSpec::Kind::LogType);

    const GeneratorSpec c = parse_generator_spec("const:2.5-1i");
    CHECK(c.kind == GeneratorSpec::Kind::Constant);
    CHECK(c.constant == Complex{2.5, -1.0});
    CHECK(parse_generator_spec("const:3").constant == Complex{3.0, 0.0});

    const GeneratorSpec r = parse_generator_spec("random:seed=7,gamma=0.5,dist=uniform");
    CHECK(r.kind == GeneratorSpec::Kind::Random);
    CHECK(r.seed == 7);
    CHECK(r.gamma == 0.5);
    CHECK(r.dist == Distribution::Uniform);

    CHECK(parse_generator_spec("file:/tmp/x.json").path == "/tmp/x.json");
    CHECK_THROWS_AS(parse_generator_spec("wavelet"), std::invalid_argument);
    CHECK_THROWS_AS(parse_generator_spec("random:foo=1"), std::invalid_argument);
}

TEST_CASE("campaign config round-trips through JSON") {
    CampaignConfig cfg;
    cfg.depths = {2, 3};
    cfg.trials = 4;
    cfg.seed = 11;
    cfg.gamma = 0.6;
    cfg.dist = Distribution::Uniform;
    cfg.tol.structural = 2e-10;
    cfg.out_dir = "somewhere";
    const CampaignConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.depths == cfg.depths);
    CHECK(back.trials == cfg.trials);
    CHECK(back.seed == cfg.seed);
    CHECK(back.gamma == cfg.gamma);
    CHECK(back.dist == cfg.dist);
    CHECK(back.tol.structural == cfg.tol.structural);
    CHECK(back.out_dir == cfg.out_dir);
}

TEST_CASE("a small campaign passes every invariant") {
    CampaignConfig cfg;
    cfg.depths = {2, 3};
    cfg.trials = 3;
    cfg.seed = 0;
    const CampaignResult res = run_verify_campaign(cfg);
    for (const auto& inv : res.invariants) {
        INFO(inv.name << " worst " << inv.worst << " at " << inv.detail);
        CHECK(inv.pass);
    }
    CHECK(res.pass());
    CHECK(res.rows.size() == 6);
    CHECK(res.ratio_min > 0.0);
    CHECK(res.c0_min == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("campaign rows and summary are deterministic") {
    CampaignConfig cfg;
    cfg.depths = {2};
    cfg.trials = 2;
    cfg.seed = 5;
    const CampaignResult a = run_verify_campaign(cfg);
    const CampaignResult b = run_verify_campaign(cfg);
    CHECK(campaign_csv(a) == campaign_csv(b));
    CHECK(campaign_summary(cfg, a).dump(2) == campaign_summary(cfg, b).dump(2));

    const std::string csv = campaign_csv(a);
    CHECK(csv.rfind("depth,trial,seed,A,B,C,sum_ABC", 0) == 0);
}

TEST_CASE("empty campaign reports no data") {
    CampaignConfig cfg;
    cfg.trials = 0;
    const CampaignResult res = run_verify_campaign(cfg);
    CHECK(res.no_data);
    CHECK(res.pass());
    const auto summary = campaign_summary(cfg, res);
    CHECK(summary["no_data"] == true);
    CHECK(summary["pass"] == true);
}

TEST_CASE("campaigns require composition-scale depths") {
    CampaignConfig cfg;
    cfg.depths = {1, 2};
    CHECK_THROWS_AS(run_verify_campaign(cfg), std::invalid_argument);
}

TEST_CASE("the corrupted closed-form hook trips the Gram invariant") {
    CampaignConfig cfg;
    cfg.depths = {2};
    cfg.trials = 1;
    cfg.inject_gram_error = 1e-6;
    const CampaignResult res = run_verify_campaign(cfg);
    CHECK_FALSE(res.pass());
    bool named = false;
    for (const auto& inv : res.invariants)
        if (!inv.pass) {
            CHECK(inv.name == "gram_closed_vs_direct");
            CHECK(inv.detail.find("depth=2") != std::string::npos);
            named = true;
        }
    CHECK(named);
}
