#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "evote/io/pipeline.hpp"

namespace {

using namespace evote;
using Json = nlohmann::json;

constexpr int kMalformed = 2;

sim::ElectionConfig config_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ArtifactError("cannot open config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw io::ArtifactError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw io::ArtifactError("config must be a JSON object");
  sim::ElectionConfig c;
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "booths") c.booths = val.get<std::uint32_t>();
      else if (key == "voters_per_booth") c.voters_per_booth = val.get<std::uint32_t>();
      else if (key == "candidates") c.m = val.get<std::uint32_t>();
      else if (key == "token_multiple") c.token_multiple = val.get<std::uint32_t>();
      else if (key == "audit_per_booth") c.audit_per_booth = val.get<std::uint32_t>();
      else if (key == "profile") c.profile = parse_profile(val.get<std::string>());
      else if (key == "seed") c.seed = val.get<std::string>();
      else if (key == "publish_bb2") c.publish_bb2 = val.get<bool>();
      else if (key == "vote_weights") c.vote_weights = val.get<std::vector<double>>();
      else if (key == "out") continue;  // handled by the caller
      else throw io::ArtifactError("unknown config key: " + key);
    }
  } catch (const Json::exception& e) {
    throw io::ArtifactError("config " + path + ": " + e.what());
  }
  return c;
}

struct SetupFlags {
  std::string config;
  std::optional<std::string> seed, profile;
  std::optional<std::uint32_t> booths, voters, candidates;
};

void add_setup_flags(CLI::App* cmd, SetupFlags& f) {
  cmd->add_option("--config", f.config, "JSON election configuration");
  cmd->add_option("--seed", f.seed, "master seed (overrides config)");
  cmd->add_option("--profile", f.profile, "security profile")->check(CLI::IsMember({"toy", "test", "production"}));
  cmd->add_option("--booths", f.booths, "number of booths");
  cmd->add_option("--voters", f.voters, "voters per booth");
  cmd->add_option("--candidates", f.candidates, "number of candidates m");
}

sim::ElectionConfig build_config(const SetupFlags& f, std::string& out) {
  sim::ElectionConfig c;
  if (!f.config.empty()) {
    c = config_from_json(f.config);
    std::ifstream in(f.config);
    auto j = Json::parse(in);
    if (j.contains("out") && out.empty()) out = j["out"].get<std::string>();
  }
  if (f.seed) c.seed = *f.seed;
  if (f.profile) c.profile = parse_profile(*f.profile);
  if (f.booths) c.booths = *f.booths;
  if (f.voters) c.voters_per_booth = *f.voters;
  if (f.candidates) c.m = *f.candidates;
  c.validate();
  return c;
}

// Loads the stored configuration, rebuilds the group and runs `fn` on a workspace.
template <class Fn>
int with_workspace(const std::filesystem::path& dir, Fn&& fn) {
  auto [cfg, header] = io::load_config(dir);
  return with_group(cfg.profile, as_bytes(cfg.seed), [&](const auto& grp) {
    io::check_header(header, io::header_for(grp, std::string(io::file::config), cfg.m));
    io::Workspace ws(grp, dir, cfg);
    return static_cast<int>(fn(ws));
  });
}

template <class Fn>
int fresh_workspace(const std::filesystem::path& dir, const sim::ElectionConfig& cfg, Fn&& fn) {
  return with_group(cfg.profile, as_bytes(cfg.seed), [&](const auto& grp) {
    io::Workspace ws(grp, dir, cfg);
    return static_cast<int>(fn(ws));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evote: end-to-end verifiable election simulator and verifier"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "artifact directory (default: evote-out)");

  SetupFlags setup_flags;
  auto* setup = app.add_subcommand("setup", "generate authority keys and write the election configuration");
  add_setup_flags(setup, setup_flags);

  auto* gen = app.add_subcommand("gen-tokens", "generate the token batch and BB0");
  auto* audit = app.add_subcommand("audit-tokens", "open and check a random sample of tokens");
  auto* run = app.add_subcommand("run-election", "run every polling session");
  auto* close = app.add_subcommand("close", "close booths: pair records with acknowledgments, sign BB1");
  auto* collect = app.add_subcommand("collect", "decrypt, check and index the shuffled records");
  auto* publish = app.add_subcommand("publish", "publish BB2 and BB3");
  auto* tally_cmd = app.add_subcommand("tally", "count votes from BB3");
  auto* universal = app.add_subcommand("verify-universal", "run the public checks over all boards");

  std::optional<std::uint32_t> booth, voter;
  auto* individual = app.add_subcommand("verify-individual", "check receipts and run membership proofs");
  individual->add_option("--booth", booth, "booth of the voter to check");
  individual->add_option("--voter", voter, "index of the voter within the booth");

  std::string attack;
  std::optional<std::size_t> row;
  bool colluding = false;
  auto* tamper = app.add_subcommand("tamper", "apply one attack and record its expected trace");
  tamper->add_option("--attack", attack, "attack to apply")
      ->required()
      ->check(CLI::IsMember({"inject_row", "delete_row", "alter_vote", "replay_token", "malform_token", "collide_rid",
                             "drop_ack"}));
  tamper->add_option("--booth", booth, "target voter's booth");
  tamper->add_option("--voter", voter, "target voter's index");
  tamper->add_option("--row", row, "BB3 row to attack");
  tamper->add_flag("--colluding-po", colluding, "replayed chit is signed by a colluding officer");

  SetupFlags pipe_flags;
  auto* pipeline = app.add_subcommand("pipeline", "run setup through verify-universal in one go");
  add_setup_flags(pipeline, pipe_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kMalformed;
  }

  auto* cmd = app.get_subcommands().front();
  const std::string stage = cmd->get_name();
  try {
    auto target = [&]() -> std::optional<sim::VoterId> {
      if (!booth && !voter) return std::nullopt;
      if (!booth || !voter) throw ProtocolError("--booth and --voter go together");
      return sim::VoterId{*booth, *voter};
    };
    auto dir_for = [&]() { return std::filesystem::path(out.empty() ? "evote-out" : out); };

    if (cmd == setup || cmd == pipeline) {
      auto cfg = build_config(cmd == setup ? setup_flags : pipe_flags, out);
      auto dir = dir_for();
      return fresh_workspace(dir, cfg, [&](const auto& ws) {
        return cmd == setup ? io::stage_setup(ws) : io::stage_pipeline(ws);
      });
    }

    auto dir = dir_for();
    return with_workspace(dir, [&](const auto& ws) {
      if (cmd == gen) return io::stage_gen_tokens(ws);
      if (cmd == audit) return io::stage_audit_tokens(ws);
      if (cmd == run) return io::stage_run_election(ws);
      if (cmd == close) return io::stage_close(ws);
      if (cmd == collect) return io::stage_collect(ws);
      if (cmd == publish) return io::stage_publish(ws);
      if (cmd == tally_cmd) return io::stage_tally(ws);
      if (cmd == universal) return io::stage_verify_universal(ws);
      if (cmd == individual) return io::stage_verify_individual(ws, target());
      io::TamperOptions opt{parse_attack(attack), row, target(), colluding};
      return io::stage_tamper(ws, opt);
    });
  } catch (const std::exception& e) {
    std::cerr << "evote " << stage << ": error: " << e.what() << '\n';
    return kMalformed;
  }
}
