// nibe: compact-parameter identity-based encryption over files, plus the
// analysis harness for the scheme's security reduction.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nibe/analyze.hpp"
#include "nibe/formats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCryptoReject = 3;
constexpr int kExitInternal = 4;

nibe::BackendId parse_backend(const std::string& name) {
    if (name == "toy") return nibe::BackendId::Toy;
    if (name == "curve") return nibe::BackendId::Curve;
    throw nibe::InvalidConfig("unknown backend: " + name);
}

std::string default_backend_name() {
    const char* env = std::getenv("NIBE_BACKEND");
    return env ? env : "curve";
}

void require_toy_opt_in(const nibe::PublicParams& params, bool insecure_toy) {
    if (params.group->descriptor().backend_id == nibe::BackendId::Toy && !insecure_toy)
        throw nibe::InvalidConfig(
            "these parameters use the insecure toy backend; pass --insecure-toy to proceed");
}

struct SetupArgs {
    std::uint32_t n = 0, ell = 0;
    std::string backend = default_backend_name();
    std::string params_out, master_out;
    bool oracle = false;
};

void cmd_setup(const SetupArgs& a) {
    auto group = nibe::make_backend(parse_backend(a.backend));
    nibe::SchemeConfig config{a.n, a.ell, nibe::HashId::Sha256};
    config.validate(group->descriptor());
    nibe::SystemRng rng;
    auto res = nibe::setup(*group, config, rng, a.oracle);
    nibe::write_file_atomic(a.params_out, nibe::serialize_params(res.params));
    nibe::write_file_atomic(a.master_out, nibe::serialize_master(res.params, res.master),
                            /*restrict_perms=*/true);
    std::cout << "params: " << a.params_out << " (" << res.params.logical_element_count()
              << " group elements)\nmaster: " << a.master_out << "\n";
}

struct KeygenArgs {
    std::string params, master, identity, key_out;
};

void cmd_keygen(const KeygenArgs& a) {
    auto lp = nibe::parse_params(nibe::read_file(a.params));
    auto master = nibe::parse_master(nibe::read_file(a.master), lp.params);
    nibe::SystemRng rng;
    nibe::StoredKey sk;
    sk.identity_bytes.assign(a.identity.begin(), a.identity.end());
    auto v = nibe::encode_identity(sk.identity_bytes, lp.params.config);
    sk.key = nibe::keygen(lp.params, master, v, rng);
    nibe::write_file_atomic(a.key_out, nibe::serialize_key(lp.params, sk),
                            /*restrict_perms=*/true);
    std::cout << "key for \"" << a.identity << "\": " << a.key_out << "\n";
}

struct EncryptArgs {
    std::string params, to, in, out;
    bool insecure_toy = false;
};

void cmd_encrypt(const EncryptArgs& a) {
    auto lp = nibe::parse_params(nibe::read_file(a.params));
    require_toy_opt_in(lp.params, a.insecure_toy);
    auto payload = nibe::read_file(a.in);
    nibe::SystemRng rng;
    auto v = nibe::encode_identity(a.to, lp.params.config);
    auto env = nibe::kem_dem_encrypt(lp.params, v, payload, rng);
    nibe::write_file_atomic(a.out, nibe::serialize_envelope(lp.params, env));
    std::cout << "encrypted " << payload.size() << " bytes to \"" << a.to << "\": " << a.out
              << "\n";
}

struct DecryptArgs {
    std::string params, key, in, out;
    bool insecure_toy = false;
};

void cmd_decrypt(const DecryptArgs& a) {
    auto lp = nibe::parse_params(nibe::read_file(a.params));
    require_toy_opt_in(lp.params, a.insecure_toy);
    auto sk = nibe::parse_key(nibe::read_file(a.key), lp.params);
    auto env = nibe::parse_envelope(nibe::read_file(a.in), lp.params);
    auto payload = nibe::kem_dem_decrypt(lp.params, sk.key, env);
    nibe::write_file_atomic(a.out, payload);
    std::cout << "decrypted " << payload.size() << " bytes: " << a.out << "\n";
}

struct AnalyzeArgs {
    std::string mode = "sizes";
    nibe::AnalyzeOptions opt;
    std::string backend = default_backend_name();
    std::string report_out;
};

void cmd_analyze(AnalyzeArgs a) {
    if (a.mode == "reduction")
        a.opt.mode = nibe::AnalyzeMode::Reduction;
    else if (a.mode == "abort-bound")
        a.opt.mode = nibe::AnalyzeMode::AbortBound;
    else if (a.mode == "lemma1")
        a.opt.mode = nibe::AnalyzeMode::Lemma1;
    else if (a.mode == "sizes")
        a.opt.mode = nibe::AnalyzeMode::Sizes;
    else
        throw nibe::InvalidConfig("unknown analyze mode: " + a.mode);
    a.opt.backend = parse_backend(a.backend);
    auto lines = nibe::run_analyze(a.opt);
    std::string report;
    for (const auto& line : lines) report += line + "\n";
    if (!a.report_out.empty()) {
        nibe::write_file_atomic(
            a.report_out,
            std::span(reinterpret_cast<const unsigned char*>(report.data()), report.size()));
    }
    std::cout << report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compact-parameter identity-based encryption"};
    app.require_subcommand(1);

    SetupArgs setup_args;
    auto* setup = app.add_subcommand("setup", "generate public parameters and a master secret");
    setup->add_option("--n", setup_args.n, "identity block count")->required();
    setup->add_option("--ell", setup_args.ell, "bits per identity block")->required();
    setup->add_option("--backend", setup_args.backend, "toy | curve");
    setup->add_option("--params-out", setup_args.params_out, "public parameters path")->required();
    setup->add_option("--master-out", setup_args.master_out, "master secret path")->required();
    setup->add_flag("--oracle", setup_args.oracle, "retain alpha in the master file (tests only)");

    KeygenArgs keygen_args;
    auto* keygen = app.add_subcommand("keygen", "derive a private key for an identity");
    keygen->add_option("--params", keygen_args.params)->required();
    keygen->add_option("--master", keygen_args.master)->required();
    keygen->add_option("--identity", keygen_args.identity)->required();
    keygen->add_option("--key-out", keygen_args.key_out)->required();

    EncryptArgs encrypt_args;
    auto* encrypt = app.add_subcommand("encrypt", "encrypt a file to an identity");
    encrypt->add_option("--params", encrypt_args.params)->required();
    encrypt->add_option("--to", encrypt_args.to, "recipient identity")->required();
    encrypt->add_option("--in", encrypt_args.in)->required();
    encrypt->add_option("--out", encrypt_args.out)->required();
    encrypt->add_flag("--insecure-toy", encrypt_args.insecure_toy,
                      "allow the discrete-log-transparent toy backend");

    DecryptArgs decrypt_args;
    auto* decrypt = app.add_subcommand("decrypt", "decrypt an envelope with a private key");
    decrypt->add_option("--params", decrypt_args.params)->required();
    decrypt->add_option("--key", decrypt_args.key)->required();
    decrypt->add_option("--in", decrypt_args.in)->required();
    decrypt->add_option("--out", decrypt_args.out)->required();
    decrypt->add_flag("--insecure-toy", decrypt_args.insecure_toy,
                      "allow the discrete-log-transparent toy backend");

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "run the reduction / abort-bound harnesses");
    analyze->add_option("--mode", analyze_args.mode, "reduction | abort-bound | lemma1 | sizes");
    analyze->add_option("--q", analyze_args.opt.q, "max private-key queries");
    analyze->add_option("--ell", analyze_args.opt.ell, "bits per identity block");
    analyze->add_option("--n", analyze_args.opt.n, "identity block count");
    analyze->add_option("--trials", analyze_args.opt.trials, "games or Monte Carlo trials");
    analyze->add_option("--seed", analyze_args.opt.seed, "deterministic seed");
    analyze->add_option("--backend", analyze_args.backend, "backend for sizes mode");
    analyze->add_option("--report-out", analyze_args.report_out, "write report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*setup) cmd_setup(setup_args);
        if (*keygen) cmd_keygen(keygen_args);
        if (*encrypt) cmd_encrypt(encrypt_args);
        if (*decrypt) cmd_decrypt(decrypt_args);
        if (*analyze) cmd_analyze(analyze_args);
        return kExitOk;
    } catch (const nibe::TagMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCryptoReject;
    } catch (const nibe::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nibe::WrongLength& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nibe::NotCanonical& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nibe::InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
