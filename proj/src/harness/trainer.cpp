#include "secsemcom/harness/trainer.hpp"

#include <cmath>
#include <fstream>
#include <omp.h>

namespace secsemcom::harness {

using channel::ChannelKind;
using objectives::ObjectiveKind;

Trainer::Trainer(TrainConfig config, const dataset::DatasetSplit& train_split)
    : cfg_(std::move(config)), split_(&train_split) {
  cfg_.codec.validate();
  cfg_.channel.validate();
  cfg_.objective.validate();
  if (split_->samples.empty()) throw dataset::DataError("training split is empty");
  const Image& first = split_->samples.front().pixels;
  if (first.h != cfg_.codec.image_h || first.w != cfg_.codec.image_w ||
      first.c != cfg_.codec.image_c)
    throw ConfigError("dataset images are " + std::to_string(first.w) + "x" +
                      std::to_string(first.h) + "x" + std::to_string(first.c) +
                      " but codec config expects " + std::to_string(cfg_.codec.image_w) +
                      "x" + std::to_string(cfg_.codec.image_h) + "x" +
                      std::to_string(cfg_.codec.image_c));
}

TrainOutcome Trainer::pretrain(const std::filesystem::path& out_dir) {
  return run(out_dir, /*ideal_channel=*/true, "pretrain");
}

TrainOutcome Trainer::train(const std::filesystem::path& out_dir) {
  return run(out_dir, /*ideal_channel=*/false, "train");
}

TrainOutcome Trainer::run(const std::filesystem::path& out_dir, bool ideal_channel,
                          const std::string& phase) {
  const bool secure = !ideal_channel && cfg_.objective.kind == ObjectiveKind::secure_mse;
  const uint64_t seed = cfg_.master_seed;

  TrainOutcome outcome;
  outcome.run_dir = out_dir / cfg_.derive_run_id(phase);
  RunRecord record(outcome.run_dir);
  {
    std::ofstream cfg_echo(outcome.run_dir / "config.cfg");
    cfg_echo << cfg_.to_config_text();
  }

  codec::Codec<float> model =
      (!ideal_channel && !cfg_.pretrain_checkpoint.empty())
          ? ckpt::load_checkpoint(cfg_.pretrain_checkpoint, cfg_.codec)
          : codec::Codec<float>::build(cfg_.codec, seed);
  auto params = model.params();
  nn::Adam<float> adam(params, cfg_.optimizer.learning_rate);

  record.append_meta({{"phase", phase},
                      {"run_id", cfg_.derive_run_id(phase)},
                      {"master_seed", seed},
                      {"objective", objectives::to_string(cfg_.objective.kind)},
                      {"channel", channel::to_string(cfg_.channel.kind)},
                      {"snr_bob_db", ideal_channel ? "ideal"
                                                   : std::to_string(cfg_.channel.snr_bob_db)},
                      {"learning_rate", cfg_.optimizer.learning_rate},
                      {"batch_size", cfg_.batch_size},
                      {"epochs", cfg_.epochs},
                      {"train_samples", split_->samples.size()},
                      {"param_count", nn::param_count(params)},
                      {"omp_threads", omp_get_max_threads()},
                      {"corpus", split_->is_full_corpus() ? "linnaeus5-full" : "subset"}});

  const double p = cfg_.power;
  const double sigma_b2 =
      ideal_channel ? 0.0 : channel::snr_to_noise_power(cfg_.channel.snr_bob_db, p);
  const double sigma_e2 = cfg_.channel.eve_noise_ratio_linear() * sigma_b2;

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    dataset::BatchPlan plan;
    plan.batch_size = cfg_.batch_size;
    plan.drop_last = split_->samples.size() >= static_cast<size_t>(cfg_.batch_size);
    plan.shuffle_seed = RngStream::derive_seed(seed, phase + "-shuffle", epoch);
    const auto batches = dataset::make_batches(*split_, plan);

    objectives::LossReport epoch_report;
    for (size_t bi = 0; bi < batches.size(); ++bi) {
      const Tensor<float> source = batches.batch(bi);
      const uint64_t step_tag = static_cast<uint64_t>(epoch) * 1000000ull + bi;
      RngStream noise_rng(RngStream::derive_seed(seed, phase + "-noise", step_tag));

      codec::Encoder<float>::Cache enc_cache;
      Tensor<float> z = model.encoder.forward(source, &enc_cache);
      codec::PowerNormCache<float> pn_cache;
      Tensor<float> x = codec::power_normalize(z, p, &pn_cache);

      // channel: Bob first so his noise draws are identical whether or not
      // Eve's branch runs
      Tensor<float> y_b = channel::add_awgn(x, sigma_b2, noise_rng);
      Tensor<float> y_e;
      channel::ChannelRealization realization;
      if (secure) {
        if (cfg_.channel.kind == ChannelKind::miso_mrt) {
          RngStream fading_rng(RngStream::derive_seed(seed, phase + "-fading", step_tag));
          realization = channel::sample_miso_realization(cfg_.channel.antennas, fading_rng);
          y_e = channel::miso_eve_apply(x, realization.alpha_e, sigma_e2, noise_rng);
        } else {
          y_e = channel::add_awgn(x, sigma_e2, noise_rng);
        }
      }

      codec::Decoder<float>::Cache dec_cache_b;
      Tensor<float> s_hat_b = model.decoder.forward(y_b, &dec_cache_b);

      objectives::LossReport report;
      Tensor<float> g_bob, g_eve;
      Tensor<float> s_hat_e;
      codec::Decoder<float>::Cache dec_cache_e;
      if (secure) {
        s_hat_e = model.decoder.forward(y_e, &dec_cache_e);
        auto [total, rep] =
            objectives::secure_mse_loss(source, s_hat_b, s_hat_e, cfg_.objective);
        report = rep;
        auto grads = objectives::secure_mse_backward(source, s_hat_b, s_hat_e, cfg_.objective);
        g_bob = std::move(grads.bob);
        g_eve = std::move(grads.eve);
      } else {
        report.total = objectives::mse_loss(source, s_hat_b);
        report.bob_distortion = report.total;
        g_bob = objectives::mse_loss_backward(source, s_hat_b);
      }

      if (!std::isfinite(report.total)) {
        record.append_abort("loss diverged (nan/inf) at epoch " + std::to_string(epoch) +
                            " batch " + std::to_string(bi));
        throw TrainingDiverged("loss diverged at epoch " + std::to_string(epoch));
      }

      nn::zero_grads(params);
      Tensor<float> g_x = model.decoder.backward(g_bob, dec_cache_b);
      if (secure) {
        Tensor<float> g_ye = model.decoder.backward(g_eve, dec_cache_e);
        if (cfg_.channel.kind == ChannelKind::miso_mrt)
          g_ye = channel::miso_eve_backward(g_ye, realization.alpha_e);
        g_x.vec() += g_ye.vec();
      }
      Tensor<float> g_z = codec::power_normalize_backward(g_x, pn_cache, p);
      model.encoder.backward(g_z, enc_cache);
      adam.step();

      epoch_report.total += report.total;
      epoch_report.bob_distortion += report.bob_distortion;
      epoch_report.eve_blackness_distance += report.eve_blackness_distance;
      epoch_report.penalty_active_fraction += report.penalty_active_fraction;
    }
    const double nb = static_cast<double>(batches.size());
    epoch_report.total /= nb;
    epoch_report.bob_distortion /= nb;
    epoch_report.eve_blackness_distance /= nb;
    epoch_report.penalty_active_fraction /= nb;
    record.append_epoch(epoch, epoch_report);
    outcome.epoch_reports.push_back(epoch_report);
  }

  std::filesystem::create_directories(outcome.run_dir / "checkpoints");
  outcome.checkpoint =
      outcome.run_dir / "checkpoints" / (phase == "pretrain" ? "pretrain.ckpt" : "final.ckpt");
  ckpt::Meta meta{{"phase", phase},
                  {"run_id", cfg_.derive_run_id(phase)},
                  {"corpus", split_->is_full_corpus() ? "linnaeus5-full" : "subset"},
                  {"master_seed", std::to_string(cfg_.master_seed)}};
  ckpt::save_checkpoint(outcome.checkpoint, model, meta);
  record.mark_complete();
  outcome.model = std::move(model);
  return outcome;
}

}  // namespace secsemcom::harness
