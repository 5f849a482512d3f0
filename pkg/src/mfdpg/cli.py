"""Command-line interface.

Scriptability contract: `generate` writes exactly the password plus a
newline to stdout; everything else (prompts, enrollment secrets,
diagnostics) goes to stderr. Exit codes: 0 success, 2 invalid usage or
missing state, 3 vault already exists, 4 wrong factors, 5 policy error,
6 revocation capacity exhausted, 7 malformed import.
"""
from __future__ import annotations

import argparse
import getpass
import os
import secrets
import sys
import time

from . import derivation, errors, mfkdf, otp, state
from .factors import (
    KIND_HMAC,
    KIND_HOTP,
    KIND_PASSWORD,
    KIND_TOTP,
    FactorWitness,
    HmacSpec,
    HotpSpec,
    PasswordSpec,
    TotpSpec,
    hmac_sha1_response,
)
from .kdf import KdfParams
from .policy import DEFAULT_MAX_LENGTH, PasswordPolicy, load_policy_corpus
from .revocation import RevocationConfig

EXIT_USAGE = 2
EXIT_VAULT_EXISTS = 3
EXIT_WRONG_FACTORS = 4
EXIT_POLICY = 5
EXIT_REVOCATION_FULL = 6
EXIT_IMPORT = 7

DEFAULT_POLICY = PasswordPolicy("[A-Za-z0-9]{20,32}")

_KIND_ALIASES = {
    "password": KIND_PASSWORD,
    "hotp": KIND_HOTP,
    "totp": KIND_TOTP,
    "hmac": KIND_HMAC,
    "hmac_challenge": KIND_HMAC,
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _err(message: str) -> None:
    print(f"mfdpg: {message}", file=sys.stderr)


def _now(args) -> int:
    return args.at if args.at is not None else int(time.time())


def _prompt_hidden(prompt: str) -> str:
    if sys.stdin.isatty():
        return getpass.getpass(prompt)
    print(prompt, end="", file=sys.stderr, flush=True)
    line = sys.stdin.readline()
    if not line:
        raise CliError("no input available for prompt")
    return line.rstrip("\n")


def _load_state(args) -> state.VaultState:
    try:
        return state.load_vault(args.state)
    except FileNotFoundError:
        raise CliError(f"no vault at {args.state} (run 'mfdpg init')")


def _parse_kv(values) -> list[tuple[str | None, str]]:
    out = []
    for value in values or []:
        if "=" in value:
            fid, payload = value.split("=", 1)
            out.append((fid, payload))
        else:
            out.append((None, value))
    return out


def _collect_witnesses(vault: state.VaultState, args) -> list[FactorWitness]:
    selected = list(args.use) if args.use else [c.id for c in vault.factors]
    otps = _parse_kv(args.otp)
    hmac_files = _parse_kv(args.hmac_secret_file)
    witnesses = []
    for fid in selected:
        try:
            config = vault.factor(fid)
        except KeyError:
            raise CliError(f"vault has no factor {fid!r}")
        if config.kind == KIND_PASSWORD:
            witnesses.append(FactorWitness(fid, _prompt_hidden(
                f"Password for factor '{fid}': ")))
        elif config.kind in (KIND_HOTP, KIND_TOTP):
            code = _take(otps, fid)
            if code is None:
                code = _prompt_hidden(f"One-time code for factor '{fid}': ")
            witnesses.append(FactorWitness(fid, code.strip()))
        elif config.kind == KIND_HMAC:
            path = _take(hmac_files, fid)
            if path is None:
                raise CliError(
                    f"factor {fid!r} needs --hmac-secret-file (software responder)")
            secret = bytes.fromhex(_read_text(path).strip())
            witnesses.append(FactorWitness(
                fid, hmac_sha1_response(secret, config.public.challenge)))
    return witnesses


def _take(entries: list, fid: str) -> str | None:
    for i, (key, payload) in enumerate(entries):
        if key == fid:
            return entries.pop(i)[1]
    for i, (key, payload) in enumerate(entries):
        if key is None:
            return entries.pop(i)[1]
    return None


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")


def _resolve_policy(args, service: str) -> PasswordPolicy:
    corpus = load_policy_corpus(args.policy_file)
    if args.policy:
        for record in corpus:
            if record.service == args.policy:
                return record.policy
        return PasswordPolicy(args.policy, max_length=args.max_length)
    for record in corpus:
        if record.service == service:
            return record.policy
    return DEFAULT_POLICY


# --- subcommands ----------------------------------------------------------------

def cmd_init(args) -> int:
    if os.path.exists(os.path.expanduser(args.state)) and not args.force:
        _err(f"vault already exists at {args.state} (use --force to replace)")
        return EXIT_VAULT_EXISTS
    specs = []
    enrollment = []
    for entry in args.factor or []:
        kind_name, _, fid = entry.partition(":")
        kind = _KIND_ALIASES.get(kind_name)
        if kind is None:
            raise CliError(f"unknown factor kind {kind_name!r}")
        fid = fid or kind_name
        if kind == KIND_PASSWORD:
            password = _prompt_hidden(f"Choose password for factor '{fid}': ")
            specs.append(PasswordSpec(fid, password))
        else:
            secret = secrets.token_bytes(20)
            enrollment.append((fid, kind, secret))
            spec_cls = {KIND_HOTP: HotpSpec, KIND_TOTP: TotpSpec, KIND_HMAC: HmacSpec}[kind]
            specs.append(spec_cls(fid, secret))
    if not specs:
        raise CliError("at least one --factor is required")
    threshold = args.threshold if args.threshold is not None else len(specs)
    if not 1 <= threshold <= len(specs):
        raise CliError(f"--threshold {threshold} out of range for {len(specs)} factors")

    t, m, p = args.kdf_cost
    vault, _master = mfkdf.setup_vault(
        specs, threshold,
        kdf=KdfParams(t=t, m=m, p=p),
        revocation=RevocationConfig(n=args.revocations),
        now=_now(args),
    )
    state.save_vault(args.state, vault)
    for fid, kind, secret in enrollment:
        print(f"factor '{fid}' ({kind}) secret: base32 {otp.to_base32(secret)} "
              f"hex {secret.hex()}", file=sys.stderr)
        print("  (enroll it now; it is shown only once)", file=sys.stderr)
    _err(f"vault written to {args.state} "
         f"({len(specs)} factors, threshold {threshold})")
    return 0


def cmd_generate(args) -> int:
    vault = _load_state(args)
    service = derivation.canonical_service(args.service)
    policy = _resolve_policy(args, service)
    witnesses = _collect_witnesses(vault, args)
    password, _preimage, vault = derivation.mfdpg_generate(
        vault, witnesses, service, policy, _now(args))
    state.save_vault(args.state, vault)
    print(password)
    return 0


def cmd_revoke(args) -> int:
    vault = _load_state(args)
    service = derivation.canonical_service(args.service)
    witnesses = _collect_witnesses(vault, args)
    vault = derivation.revoke_current(vault, witnesses, service, _now(args))
    state.save_vault(args.state, vault)
    _err(f"revoked current password for {service}")
    return 0


def cmd_export(args) -> int:
    print(state.export(_load_state(args)))
    return 0


def cmd_import(args) -> int:
    text = sys.stdin.read() if args.data == "-" else args.data
    vault = state.import_vault(text)
    if os.path.exists(os.path.expanduser(args.state)) and not args.force:
        _err(f"vault already exists at {args.state} (use --force to replace)")
        return EXIT_VAULT_EXISTS
    state.save_vault(args.state, vault)
    _err(f"vault imported to {args.state}")
    return 0


def cmd_policy_list(args) -> int:
    for record in load_policy_corpus(args.policy_file):
        print(record.service)
    return 0


# --- argument parsing -------------------------------------------------------------

def _kdf_cost(text: str) -> tuple[int, int, int]:
    try:
        t, m, p = (int(x) for x in text.split(","))
        return t, m, p
    except ValueError:
        raise argparse.ArgumentTypeError("expected T,M,P (e.g. 2,24576,1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfdpg",
        description="Multi-factor deterministic password generator.")
    parser.add_argument(
        "--state", default=os.environ.get("MFDPG_STATE", state.DEFAULT_STATE_PATH),
        help="vault state file (env MFDPG_STATE)")
    parser.add_argument(
        "--at", type=int, default=None, metavar="EPOCH",
        help="clock override in unix seconds (TOTP determinism)")
    parser.add_argument(
        "--policy-file", default=None,
        help="policy corpus JSON (default: bundled corpus)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create a new vault")
    p.add_argument("--factor", action="append", metavar="KIND[:ID]",
                   help="password | hotp | totp | hmac (repeatable)")
    p.add_argument("--threshold", type=int, default=None,
                   help="factors required to derive (default: all)")
    p.add_argument("--revocations", type=int, default=RevocationConfig.n,
                   help="revocation capacity N")
    p.add_argument("--kdf-cost", type=_kdf_cost, default=(2, 24576, 1),
                   metavar="T,M,P", help="Argon2id cost parameters")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_init)

    for name, func, needs_witnesses in (
            ("generate", cmd_generate, True), ("revoke", cmd_revoke, True)):
        p = sub.add_parser(name, help=f"{name} a password for a service")
        p.add_argument("service")
        if name == "generate":
            p.add_argument("--policy", default=None,
                           help="corpus name or inline must-match regex")
            p.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH)
        p.add_argument("--use", action="append", metavar="ID",
                       help="factor ids to present (default: all)")
        p.add_argument("--otp", action="append", metavar="[ID=]CODE")
        p.add_argument("--hmac-secret-file", action="append", metavar="[ID=]PATH")
        p.set_defaults(func=func)

    p = sub.add_parser("export", help="print the portable vault string")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("import", help="install a vault from its export string")
    p.add_argument("data", help="export string, or - for stdin")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("policy", help="policy corpus commands")
    psub = p.add_subparsers(dest="policy_command", required=True)
    pl = psub.add_parser("list", help="list bundled policy names")
    pl.set_defaults(func=cmd_policy_list)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _err(str(exc))
        return exc.code
    except errors.VerifierMismatch:
        _err("derivation failed: at least one factor witness is wrong")
        return EXIT_WRONG_FACTORS
    except (errors.PolicyEmpty, errors.RegexSyntaxError,
            errors.UnsupportedFeature, errors.StateExplosion) as exc:
        _err(f"policy error: {exc}")
        return EXIT_POLICY
    except errors.RevocationCapacityExhausted as exc:
        _err(f"revocation capacity exhausted: {exc}")
        return EXIT_REVOCATION_FULL
    except (errors.MalformedEncoding, errors.VersionUnsupported,
            errors.VersionMismatch, errors.CorruptLength) as exc:
        _err(f"import failed: {exc}")
        return EXIT_IMPORT
    except errors.MfdpgError as exc:
        _err(str(exc))
        return 1
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
