#include "potentia/cli.hpp"

#include "potentia/io.hpp"
#include "potentia/settheory.hpp"
#include "potentia/synthesis.hpp"
#include "potentia/theories.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>

namespace potentia::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t max_worlds_cap() {
  const char* env = std::getenv("POTENTIA_MAX_WORLDS");
  if (!env || !*env) return 8;
  std::size_t v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0 || v > 64)
    throw UsageError("POTENTIA_MAX_WORLDS must be an integer in 1..64");
  return v;
}

Signature parse_signature(const std::string& text) {
  if (text.empty()) return Signature::membership();
  std::vector<RelationSymbol> rels;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(pos, end - pos);
    const auto slash = item.find('/');
    int arity = -1;
    if (slash != std::string::npos) {
      auto [ptr, ec] = std::from_chars(item.data() + slash + 1, item.data() + item.size(), arity);
      if (ec != std::errc() || ptr != item.data() + item.size()) arity = -1;
    }
    if (slash == 0 || slash == std::string::npos || arity < 0) throw UsageError("bad signature item '" + item + "'");
    rels.push_back({item.substr(0, slash), arity});
    pos = end + 1;
  }
  return Signature(rels);
}

const char* flag(bool b) { return b ? "true" : "false"; }

Theory theory_for(ControlKind k) {
  switch (k) {
    case ControlKind::SwitchFamily: return Theory::S5;
    case ControlKind::ButtonFamily: return Theory::S4_2;
    case ControlKind::Ratchet: return Theory::S4_3;
    default: throw UsageError("synthesize needs a switches, buttons or ratchet certificate");
  }
}

void write_cert(const std::string& dir, const std::string& name, const ControlCertificate& c, std::ostream& out) {
  const auto path = (std::filesystem::path(dir) / name).string();
  write_json_file(path, certificate_to_json(c));
  out << "wrote " << path << " kind=" << to_string(c.kind()) << " verified=" << flag(c.verified()) << '\n';
}

int demo(const std::string& which, int N, const std::string& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  const std::string stem = which + "-" + std::to_string(N);
  const std::string sys_file = stem + ".json";
  int status = kOk;
  auto emit = [&](const PotentialistSystem& s, const std::string& name, ControlCertificate c) {
    c = certify(s, std::move(c));
    if (!c.verified()) status = kVerificationFailed;
    write_cert(dir, name, c, out);
  };
  if (which == "rank") {
    if (N < 0 || N > kMaxRank) throw UsageError("demo rank needs 0 ≤ N ≤ 5");
    auto s = build_rank_system(N);
    write_json_file((std::filesystem::path(dir) / sys_file).string(), system_to_json(s));
    out << "wrote " << (std::filesystem::path(dir) / sys_file).string() << " worlds=" << s.size() << '\n';
    std::vector<FOFormula> r;
    for (int v = 0; v <= N; ++v) r.push_back(ordinal_count_at_least(v));
    emit(s, stem + "-long-ratchet.json", ControlCertificate(ControlKind::LongRatchet, r, 0, std::nullopt, sys_file));
    if (N >= 2)
      emit(s, stem + "-dial.json", ControlCertificate(ControlKind::Dial, height_dial(2, N), 0, std::nullopt, sys_file));
    if (N >= 2) {
      const int m = N >= 3 ? 2 : 1;
      const int n = (N - 1) / m;
      auto ex = rank_ratchet(n, m, N);
      emit(s, stem + "-ratchet.json",
           ControlCertificate(ControlKind::Ratchet, ex.ratchet, 0, Companion{CompanionKind::Dial, ex.dial}, sys_file));
    }
    return status;
  }
  if (which == "transitive") {
    if (N < 0 || N > 3) throw UsageError("demo transitive needs 0 ≤ N ≤ 3");
    auto s = build_transitive_system(N);
    write_json_file((std::filesystem::path(dir) / sys_file).string(), system_to_json(s));
    out << "wrote " << (std::filesystem::path(dir) / sys_file).string() << " worlds=" << s.size() << '\n';
    const int available = N >= 1 ? static_cast<int>(v_size(N) - v_size(N - 1)) : 0;
    const int k = std::min(2, available);
    if (k > 0) {
      auto fam = transitive_buttons(k, N);
      emit(s, stem + "-buttons.json",
           ControlCertificate(ControlKind::ButtonFamily, fam.buttons, 0, fam.companion, sys_file));
    }
    return status;
  }
  throw UsageError("demo needs 'rank' or 'transitive'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Potentialist modal logic toolkit", "potentia"};
  app.require_subcommand(1);

  std::string prop_text, fo_text, sig_text, system_file, cert_file, world_id, formula, theory_name, which, out_dir = ".";
  std::size_t bound = 0;
  int N = 0;

  auto* parse = app.add_subcommand("parse", "Parse and print a formula");
  auto* parse_group = parse->add_option_group("input");
  parse_group->add_option("--prop", prop_text, "propositional modal formula");
  parse_group->add_option("--fo", fo_text, "first-order modal formula");
  parse_group->require_option(1);
  parse->add_option("--sig", sig_text, "signature for --fo, e.g. mem/2,P/1 (default mem/2)");

  auto* translate = app.add_subcommand("translate", "Print the potentialist translation of a nonmodal formula");
  translate->add_option("formula", fo_text)->required();
  translate->add_option("--sig", sig_text, "signature (default mem/2)");

  auto* eval = app.add_subcommand("eval", "Evaluate a sentence at a world");
  eval->add_option("--system", system_file)->required();
  eval->add_option("--world", world_id, "world name or index")->required();
  eval->add_option("--formula", formula)->required();

  auto* frame = app.add_subcommand("frame", "Frame properties of a system");
  frame->add_option("--system", system_file)->required();

  auto* verify = app.add_subcommand("verify-control", "Re-verify a control certificate");
  verify->add_option("--system", system_file)->required();
  verify->add_option("--cert", cert_file)->required();

  auto* decide_cmd = app.add_subcommand("decide", "Bounded theoremhood in S4, S4.2, S4.3 or S5");
  decide_cmd->add_option("--formula", formula)->required();
  decide_cmd->add_option("--theory", theory_name)->required();
  decide_cmd->add_option("--bound", bound, "largest frame searched (default from the formula, capped)");

  auto* synth = app.add_subcommand("synthesize", "Refute a formula in a system using its controls");
  synth->add_option("--system", system_file)->required();
  synth->add_option("--cert", cert_file)->required();
  synth->add_option("--formula", formula)->required();
  synth->add_option("--theory", theory_name)->required();
  synth->add_option("--bound", bound, "largest countermodel searched");

  auto* demo_cmd = app.add_subcommand("demo", "Export a set-theoretic system with its certificates");
  demo_cmd->add_option("which", which, "rank or transitive")->required();
  demo_cmd->add_option("--N", N)->required();
  demo_cmd->add_option("--out", out_dir, "output directory");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (parse->parsed()) {
      if (!prop_text.empty()) {
        auto f = parse_prop(prop_text);
        out << to_string(f) << '\n' << "size=" << size(f) << " modal_depth=" << modal_depth(f) << '\n';
      } else {
        auto f = parse_fo(fo_text, parse_signature(sig_text));
        out << to_string(f) << '\n'
            << "size=" << size(f) << " quantifier_depth=" << quantifier_depth(f)
            << " sentence=" << flag(is_sentence(f)) << '\n';
      }
      return kOk;
    }
    if (translate->parsed()) {
      auto f = parse_fo(fo_text, parse_signature(sig_text));
      if (has_modal(f)) throw UsageError("translate expects a nonmodal formula");
      out << to_string(potentialist_translation(f)) << '\n';
      return kOk;
    }
    if (eval->parsed()) {
      auto s = system_from_json(read_json_file(system_file));
      auto w = resolve_world(s, world_id);
      auto f = parse_fo(formula, s.signature());
      out << flag(eval_fo(s, w, f)) << '\n';
      return kOk;
    }
    if (frame->parsed()) {
      auto s = system_from_json(read_json_file(system_file));
      auto p = frame_properties(s.frame());
      out << "worlds=" << s.size() << '\n'
          << "reflexive=" << flag(p.reflexive) << '\n'
          << "transitive=" << flag(p.transitive) << '\n'
          << "convergent=" << flag(p.convergent) << '\n'
          << "linear=" << flag(p.linear_preorder) << '\n'
          << "complete=" << flag(p.complete) << '\n'
          << "pre_boolean=" << flag(is_pre_boolean_algebra(s.frame())) << '\n';
      return kOk;
    }
    if (verify->parsed()) {
      auto s = system_from_json(read_json_file(system_file));
      auto c = certify(s, certificate_from_json(read_json_file(cert_file), s));
      out << "kind=" << to_string(c.kind()) << " base=" << s.name(c.base_world()) << " formulas=" << c.formulas().size()
          << " verified=" << flag(c.verified()) << '\n';
      return c.verified() ? kOk : kVerificationFailed;
    }
    if (decide_cmd->parsed()) {
      const auto phi = parse_prop(formula);
      const Theory t = parse_theory(theory_name);
      const std::size_t b = bound ? bound : default_bound(phi, max_worlds_cap());
      auto d = decide(phi, t, b);
      out << to_string(d) << '\n';
      if (d.countermodel) out << countermodel_to_json(*d.countermodel).dump() << '\n';
      return kOk;
    }
    if (synth->parsed()) {
      auto s = system_from_json(read_json_file(system_file));
      auto c = certify(s, certificate_from_json(read_json_file(cert_file), s));
      const auto phi = parse_prop(formula);
      const Theory t = parse_theory(theory_name);
      if (theory_for(c.kind()) != t)
        throw UsageError("a " + to_string(c.kind()) + " certificate synthesizes against " + to_string(theory_for(c.kind())));
      if (!c.verified()) {
        out << "certificate rejected: " << to_string(c.kind()) << " does not verify at " << s.name(c.base_world())
            << '\n';
        return kVerificationFailed;
      }
      auto res = synthesize(s, c.base_world(), phi, c, bound ? bound : max_worlds_cap());
      out << "theory=" << to_string(res.theory) << '\n';
      if (!res.countermodel) {
        out << "no instance: " << res.message << '\n';
        return kOk;
      }
      out << "countermodel " << countermodel_to_json(*res.countermodel).dump() << '\n';
      const auto& a = *res.association;
      for (std::size_t u = 0; u < a.labels.size(); ++u) out << "label w" << u << ": " << to_string(a.labels[u]) << '\n';
      for (const auto& [i, f] : a.sigma.images()) out << "sigma p" << i << ": " << to_string(f) << '\n';
      const auto& bis = *res.bisimulation;
      if (bis.ok)
        out << "bisimulation=ok live=" << bis.live.size() << " frontier=" << bis.frontier.size() << '\n';
      else
        out << "bisimulation=failed " << bis.message << '\n';
      out << "refutation=" << to_string(*res.verdict) << " at " << s.name(c.base_world()) << '\n';
      return bis.ok && *res.verdict == Verdict::Fails ? kOk : kVerificationFailed;
    }
    if (demo_cmd->parsed()) return demo(which, N, out_dir, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const PotentialistError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace potentia::cli
