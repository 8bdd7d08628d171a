import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** Interpreter that has the curvkit package importable. */
export const PYTHON = process.env.CURVKIT_PYTHON ?? "python3";

export class CliError extends Error {
  readonly exitCode: number;

  constructor(message: string, exitCode: number) {
    super(message);
    this.name = "CliError";
    this.exitCode = exitCode;
  }
}

/** Run one curvkit subcommand; throws CliError on nonzero exit, using the
 * JSON error line the CLI prints on stderr when available. */
export function runCli(args: string[]): string {
  const proc = spawnSync(PYTHON, ["-m", "curvkit", ...args], {
    encoding: "utf-8",
    maxBuffer: 256 * 1024 * 1024,
  });
  if (proc.error) {
    throw new CliError(`failed to launch ${PYTHON}: ${proc.error.message}`, -1);
  }
  if (proc.status !== 0) {
    let message = proc.stderr.trim();
    try {
      const parsed = JSON.parse(proc.stderr.trim().split("\n").pop() ?? "");
      if (typeof parsed.error === "string") message = parsed.error;
    } catch {
      /* keep raw stderr */
    }
    throw new CliError(message, proc.status ?? -1);
  }
  return proc.stdout;
}

/** Run a callback with a throwaway directory for the CLI's file interfaces. */
export function withWorkdir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "curvkit-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
