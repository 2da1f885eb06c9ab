#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"

#include <lineture/attacklab.hpp>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_reject = 1;
constexpr int exit_malformed = 2;
constexpr int exit_usage = 64;
constexpr int exit_io = 74;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

lineture::Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    lineture::Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed: " + path);
    }
    return data;
}

void write_file(const std::string& path, std::span<const uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot create " + path);
    }
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

std::array<uint8_t, 32> seed_from_hex_or_random(const std::string& hex) {
    std::array<uint8_t, 32> seed{};
    if (hex.empty()) {
        std::random_device rd;
        for (auto& b : seed) {
            b = static_cast<uint8_t>(rd());
        }
        return seed;
    }
    lineture::Bytes bytes = lineture::from_hex(hex);
    if (bytes.size() != 32) {
        throw CLI::ValidationError("--seed", "expected 64 hex characters (32 bytes)");
    }
    std::copy(bytes.begin(), bytes.end(), seed.begin());
    return seed;
}

lineture::Params resolve_params(const std::string& preset, const std::vector<unsigned>& mlqt) {
    if (!preset.empty()) {
        auto p = lineture::find_preset(preset);
        if (!p) {
            throw CLI::ValidationError("--preset", "unknown preset " + preset);
        }
        return *p;
    }
    return lineture::Params{mlqt[0], mlqt[1], mlqt[2], mlqt[3]};
}

void print_params_row(const lineture::Params& p) {
    auto sz = lineture::payload_sizes(p);
    auto rep = lineture::secrecy_report(p, 32);
    std::printf("params\tm=%u l=%u q=%u t=%u\n", p.m, p.l, p.q, p.t);
    std::printf("sizes\tpriv_shares=%zu\tpriv_total=%zu\tpub=%zu\tsig_words=%zu\tsig_sessions=%zu\tsig_binders=%zu\tsig_total=%zu\n",
                sz.share_bytes, sz.share_bytes + 64, sz.public_bytes, sz.word_bytes,
                sz.session_bytes, sz.binder_bytes, sz.signature_total());
    std::printf("secrecy\tanalytic_solve=%llu\tanalytic_brute=%llu\tforge_session=%llu\tforge_words=%llu\tforge_secret=%llu\tcollision=%.0f\n",
                (unsigned long long)rep.analytic_solve, (unsigned long long)rep.analytic_brute,
                (unsigned long long)rep.forge_session, (unsigned long long)rep.forge_words,
                (unsigned long long)rep.forge_secret, rep.collision);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lineture: signature scheme over GF(2) matrix shares"};
    app.require_subcommand(1);

    std::string preset;
    std::vector<unsigned> mlqt{8, 8, 3, 3};
    auto add_param_flags = [&](CLI::App* cmd, bool with_preset) {
        if (with_preset) {
            cmd->add_option("--preset", preset, "parameter preset (lineture128/192/256)");
        }
        cmd->add_option("--m", mlqt[0], "word width in bits");
        cmd->add_option("--l", mlqt[1], "digest word count");
        cmd->add_option("--q", mlqt[2], "session block count");
        cmd->add_option("--t", mlqt[3], "session key count");
    };

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a key pair");
    std::string seed_hex, out_dir = ".";
    add_param_flags(keygen, true);
    keygen->add_option("--seed", seed_hex, "32-byte master seed as hex (default: random)");
    keygen->add_option("--out-dir", out_dir, "output directory for key.priv/key.pub");

    // sign
    auto* sign_cmd = app.add_subcommand("sign", "sign a message file");
    std::string key_path, msg_path, sig_out, rng_hex;
    sign_cmd->add_option("--key", key_path, "private key file")->required();
    sign_cmd->add_option("--msg", msg_path, "message file")->required();
    sign_cmd->add_option("--rng-seed", rng_hex, "32-byte signing rng seed as hex (default: random)");
    sign_cmd->add_option("--out", sig_out, "signature output file")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "verify a detached signature");
    std::string pub_path, vmsg_path, sig_path;
    verify_cmd->add_option("--pub", pub_path, "public key file")->required();
    verify_cmd->add_option("--msg", vmsg_path, "message file")->required();
    verify_cmd->add_option("--sig", sig_path, "signature file")->required();

    // params
    auto* params_cmd = app.add_subcommand("params", "print size and secrecy rows");
    add_param_flags(params_cmd, true);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "cryptanalysis harness");
    analyze->require_subcommand(1);
    auto* an_secrecy = analyze->add_subcommand("secrecy", "closed-form secrecy estimates");
    add_param_flags(an_secrecy, false);
    double log2_base = 32;
    an_secrecy->add_option("--log2-base", log2_base, "log2 of the accumulated signature base");

    auto* an_mc = analyze->add_subcommand("forgery-mc", "Monte Carlo forgery rate (micro scale)");
    add_param_flags(an_mc, false);
    uint64_t trials = 200000, lab_seed = 1;
    an_mc->add_option("--trials", trials, "trial count");
    an_mc->add_option("--seed", lab_seed, "harness seed");

    auto* an_rank = analyze->add_subcommand("rank", "exhaustive session-key factoring ambiguity");
    unsigned rank_m = 2, rank_q = 2;
    an_rank->add_option("--m", rank_m, "word width");
    an_rank->add_option("--q", rank_q, "session block count");
    an_rank->add_option("--seed", lab_seed, "harness seed");

    auto* an_col = analyze->add_subcommand("collision", "collision budget for a signing rate");
    add_param_flags(an_col, false);
    double rate = 1.0, years = 100.0;
    an_col->add_option("--rate", rate, "signatures per second");
    an_col->add_option("--years", years, "accumulation period in years");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*keygen) {
            lineture::Params p = resolve_params(preset, mlqt);
            p.check();
            auto seed = seed_from_hex_or_random(seed_hex);
            lineture::PrivateKey sk = lineture::generate_private_key(seed, p);
            lineture::PublicKey pk = lineture::derive_public_key(sk);
            std::filesystem::path dir(out_dir);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            auto priv = lineture::encode_private(sk);
            auto pub = lineture::encode_public(pk);
            write_file((dir / "key.priv").string(), priv);
            write_file((dir / "key.pub").string(), pub);
            std::printf("keygen\tm=%u l=%u q=%u t=%u\tkey.priv=%zu bytes\tkey.pub=%zu bytes\n",
                        p.m, p.l, p.q, p.t, priv.size(), pub.size());
            return exit_ok;
        }
        if (*sign_cmd) {
            auto sk = lineture::decode_private(read_file(key_path));
            auto msg = read_file(msg_path);
            lineture::ByteStream rng = lineture::ByteStream::seeded(
                "LNTR-RNG", seed_from_hex_or_random(rng_hex));
            lineture::Signature sig = lineture::sign(sk, msg, rng);
            auto bytes = lineture::encode_signature(sk.params, sig);
            write_file(sig_out, bytes);
            std::printf("sign\t%s\t%zu bytes\n", sig_out.c_str(), bytes.size());
            return exit_ok;
        }
        if (*verify_cmd) {
            auto pk = lineture::decode_public(read_file(pub_path));
            auto msg = read_file(vmsg_path);
            auto [sp, sig] = lineture::decode_signature(read_file(sig_path));
            if (!(sp == pk.params)) {
                std::printf("verify\tmalformed: signature/key parameter mismatch\n");
                return exit_malformed;
            }
            lineture::VerifyStatus st = lineture::verify(pk, msg, sig);
            std::printf("verify\t%s\n", std::string(lineture::to_string(st)).c_str());
            switch (st) {
                case lineture::VerifyStatus::Accept: return exit_ok;
                case lineture::VerifyStatus::Malformed: return exit_malformed;
                default: return exit_reject;
            }
        }
        if (*params_cmd) {
            lineture::Params p = resolve_params(preset, mlqt);
            p.check();
            print_params_row(p);
            return exit_ok;
        }
        if (*an_secrecy) {
            lineture::Params p{mlqt[0], mlqt[1], mlqt[2], mlqt[3]};
            auto rep = lineture::secrecy_report(p, log2_base);
            std::printf("secrecy\tm=%u\tl=%u\tq=%u\tt=%u\tlog2_base=%.0f\n", p.m, p.l, p.q, p.t, rep.log2_base);
            std::printf("analytic_solve\t%llu\n", (unsigned long long)rep.analytic_solve);
            std::printf("analytic_brute\t%llu\n", (unsigned long long)rep.analytic_brute);
            std::printf("forge_session\t%llu\n", (unsigned long long)rep.forge_session);
            std::printf("forge_words\t%llu\n", (unsigned long long)rep.forge_words);
            std::printf("forge_secret\t%llu\n", (unsigned long long)rep.forge_secret);
            std::printf("collision\t%.1f\n", rep.collision);
            std::printf("guess_session\t%llu\n", (unsigned long long)rep.guess_session);
            return exit_ok;
        }
        if (*an_mc) {
            lineture::Params p{mlqt[0], mlqt[1], mlqt[2], mlqt[3]};
            auto stats = lineture::forgery_montecarlo(p, trials, lab_seed);
            std::printf("forgery-mc\tm=%u\tl=%u\tq=%u\tt=%u\ttrials=%llu\n", p.m, p.l, p.q, p.t,
                        (unsigned long long)stats.trials);
            std::printf("successes\t%llu\tdegenerate=%llu\n", (unsigned long long)stats.successes,
                        (unsigned long long)stats.degenerate);
            std::printf("rate\t%.3e\ttarget=%.3e\tband=[%.3e, %.3e]\t%s\n", stats.rate, stats.target,
                        stats.band_low, stats.band_high,
                        stats.within_band() ? "within-band" : "out-of-band");
            return exit_ok;
        }
        if (*an_rank) {
            auto rep = lineture::factorization_ambiguity(rank_m, rank_q, lab_seed);
            std::printf("rank\tm=%u\tq=%u\tseed=%llu\n", rep.m, rep.q, (unsigned long long)lab_seed);
            std::printf("constrained_solutions\t%llu\tlog2=%.2f\n",
                        (unsigned long long)rep.constrained, rep.log2_constrained);
            std::printf("invertible_candidates\t%llu\n", (unsigned long long)rep.invertible);
            std::printf("planted_found\t%s\ttail_difference_rank=%u\n",
                        rep.planted_found ? "yes" : "no", rep.tail_difference_rank);
            return exit_ok;
        }
        if (*an_col) {
            lineture::Params p{mlqt[0], mlqt[1], mlqt[2], mlqt[3]};
            double bits = lineture::collision_budget(p, rate, years);
            std::printf("collision\tm=%u\tt=%u\trate=%.3g/s\tyears=%.3g\tbudget_bits=%.1f\n",
                        p.m, p.t, rate, years, bits);
            return exit_ok;
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return exit_usage;
    } catch (const lineture::CodecError& e) {
        std::fprintf(stderr, "malformed input: %s\n", e.what());
        return exit_malformed;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    }
    return exit_usage;
}
