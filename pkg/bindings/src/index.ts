/**
 * Thin Node bindings for the curvkit CLI.
 *
 * Every function shells out to `python -m curvkit` (interpreter overridable
 * via CURVKIT_PYTHON) and moves data through the CLI's file formats; no
 * numeric logic lives on this side, so results are exactly what the CLI
 * produces.
 */

import { join } from "node:path";
import { readFileSync } from "node:fs";

import {
  CurvatureRow,
  Edge,
  parseCurvatureCsv,
  readEdgeList,
  readLabelFile,
  writeCommunityFile,
  writeEdgeList,
  writeLabelFile,
} from "./formats.js";
import { CliError, runCli, withWorkdir } from "./runner.js";

export { CliError } from "./runner.js";
export type { CurvatureRow, Edge } from "./formats.js";

export type CurvatureKind = "lrc" | "frc" | "bfc" | "orc";

/** Per-edge curvature of the given kind, in canonical edge order. */
export function computeCurvature(edges: Edge[], kind: CurvatureKind | string): CurvatureRow[] {
  return withWorkdir((dir) => {
    const input = join(dir, "graph.txt");
    writeEdgeList(input, edges);
    const stdout = runCli(["curvature", "--input", input, "--measure", String(kind)]);
    return parseCurvatureCsv(stdout);
  });
}

export interface PreprocessConfig {
  /** "auto" (mixture valley, default) or an explicit numeric cutoff. */
  threshold?: "auto" | number;
  curvature?: CurvatureKind;
  maxIter?: number;
  tol?: number;
  varianceFloorScale?: number;
}

export interface PreprocessReport {
  edges_before: number;
  edges_after: number;
  beta: number | null;
  mu1: number | null;
  mu2: number | null;
  sigma1: number | null;
  sigma2: number | null;
  pi1: number | null;
  mode: "valley" | "degenerate_skip" | "manual";
}

export interface PreprocessResult {
  edges: Edge[];
  report: PreprocessReport;
}

/** Curvature-histogram pruning; returns the kept edges and the fit report. */
export function preprocess(edges: Edge[], config: PreprocessConfig = {}): PreprocessResult {
  return withWorkdir((dir) => {
    const input = join(dir, "graph.txt");
    const output = join(dir, "pruned.txt");
    const report = join(dir, "report.json");
    writeEdgeList(input, edges);
    const args = [
      "preprocess",
      "--input", input,
      "--out", output,
      "--report", report,
    ];
    if (config.threshold !== undefined) args.push("--threshold", String(config.threshold));
    if (config.curvature !== undefined) args.push("--curvature", config.curvature);
    if (config.maxIter !== undefined) args.push("--max-iter", String(config.maxIter));
    if (config.tol !== undefined) args.push("--tol", String(config.tol));
    if (config.varianceFloorScale !== undefined) {
      args.push("--variance-floor-scale", String(config.varianceFloorScale));
    }
    runCli(args);
    return {
      edges: readEdgeList(output),
      report: JSON.parse(readFileSync(report, "utf-8")) as PreprocessReport,
    };
  });
}

export interface SbmSpec {
  n: number;
  k: number;
  p1: number;
  p2: number;
  seed: number;
}

export interface SbmSample {
  edges: Edge[];
  labels: Record<number, number>;
}

/** One seeded stochastic-block-model draw with its planted labels. */
export function sampleSbm(spec: SbmSpec): SbmSample {
  return withWorkdir((dir) => {
    const out = join(dir, "graph.txt");
    const labels = join(dir, "labels.txt");
    runCli([
      "sample",
      "--n", String(spec.n),
      "--k", String(spec.k),
      "--p1", String(spec.p1),
      "--p2", String(spec.p2),
      "--seed", String(spec.seed),
      "--out", out,
      "--labels", labels,
    ]);
    return { edges: readEdgeList(out), labels: readLabelFile(labels) };
  });
}

function evalMetric(
  metric: "ari" | "ami",
  truth: Record<number, number>,
  pred: Record<number, number>,
): number {
  return withWorkdir((dir) => {
    const t = join(dir, "truth.txt");
    const p = join(dir, "pred.txt");
    writeLabelFile(t, truth);
    writeLabelFile(p, pred);
    const stdout = runCli(["eval", "--metric", metric, "--truth", t, "--pred", p]);
    return Number(stdout.trim());
  });
}

/** Adjusted Rand index between two node labelings (same node set). */
export function ari(truth: Record<number, number>, pred: Record<number, number>): number {
  return evalMetric("ari", truth, pred);
}

/** Adjusted mutual information between two node labelings (same node set). */
export function ami(truth: Record<number, number>, pred: Record<number, number>): number {
  return evalMetric("ami", truth, pred);
}

/** Symmetric average-best-match F1 between two covers (lists of communities). */
export function overlappingF1(truth: number[][], pred: number[][]): number {
  return withWorkdir((dir) => {
    const t = join(dir, "truth.txt");
    const p = join(dir, "pred.txt");
    writeCommunityFile(t, truth);
    writeCommunityFile(p, pred);
    const stdout = runCli(["eval", "--metric", "f1", "--truth", t, "--pred", p]);
    return Number(stdout.trim());
  });
}

/** Seeded asynchronous label propagation; returns node -> label. */
export function lpaDetect(
  edges: Edge[],
  seed: number,
  maxSweeps = 100,
): Record<number, number> {
  return withWorkdir((dir) => {
    const input = join(dir, "graph.txt");
    const out = join(dir, "labels.txt");
    writeEdgeList(input, edges);
    runCli([
      "detect",
      "--input", input,
      "--algo", "lpa",
      "--seed", String(seed),
      "--max-sweeps", String(maxSweeps),
      "--out", out,
    ]);
    return readLabelFile(out);
  });
}
