import { readFileSync, writeFileSync } from "node:fs";

export type Edge = [number, number];

export function writeEdgeList(path: string, edges: Edge[]): void {
  writeFileSync(path, edges.map(([u, v]) => `${u}\t${v}\n`).join(""));
}

export function readEdgeList(path: string): Edge[] {
  return readFileSync(path, "utf-8")
    .split("\n")
    .filter((line) => line.trim() && !line.startsWith("#"))
    .map((line) => {
      const [u, v] = line.trim().split(/\s+/).map(Number);
      return [u, v] as Edge;
    });
}

export function writeLabelFile(path: string, labels: Record<number, number>): void {
  const lines = Object.entries(labels)
    .map(([node, label]) => [Number(node), label] as const)
    .sort((a, b) => a[0] - b[0])
    .map(([node, label]) => `${node}\t${label}\n`);
  writeFileSync(path, lines.join(""));
}

export function readLabelFile(path: string): Record<number, number> {
  const out: Record<number, number> = {};
  for (const line of readFileSync(path, "utf-8").split("\n")) {
    if (!line.trim()) continue;
    const [node, label] = line.trim().split(/\s+/).map(Number);
    out[node] = label;
  }
  return out;
}

export function writeCommunityFile(path: string, cover: number[][]): void {
  writeFileSync(path, cover.map((c) => c.join(" ") + "\n").join(""));
}

export interface CurvatureRow {
  u: number;
  v: number;
  value: number;
}

export function parseCurvatureCsv(text: string): CurvatureRow[] {
  const lines = text.trim().split("\n");
  if (lines[0] !== "u,v,curvature") {
    throw new Error(`unexpected curvature CSV header: ${lines[0]}`);
  }
  return lines.slice(1).map((line) => {
    const [u, v, value] = line.split(",");
    return { u: Number(u), v: Number(v), value: Number(value) };
  });
}
