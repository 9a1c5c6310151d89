/**
 * Cross-boundary golden tests: every bridge operation must reproduce the
 * corresponding CLI invocation byte-for-byte on a shared fixture set.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { BridgeSession, CliError, ScoreGrid, Word, encodeScoreFile } from "../src/index.js";

const CLI = ["python3", "-m", "tetratag"];
const SENTINEL = -1e30;
const MARGIN = 4.0;

const sampleBank = fileURLToPath(
  new URL("../../src/tetratag/data/sample.treebank", import.meta.url),
);

function cli(args: string[]): string {
  const proc = spawnSync(CLI[0], [...CLI.slice(1), ...args], { encoding: "utf-8" });
  if (proc.status !== 0) {
    throw new Error(`cli failed: ${proc.stderr}`);
  }
  return proc.stdout;
}

function words(line: string): Word[] {
  // leaves are "(TAG word)" pairs in the bracketed text
  const out: Word[] = [];
  for (const match of line.matchAll(/\(([^()\s]+) ([^()\s]+)\)/g)) {
    out.push([match[2], match[1]]);
  }
  return out;
}

function oneHot(tags: string[], vocabulary: string[]): ScoreGrid {
  const rows = tags.length;
  const V = vocabulary.length;
  const data = new Float64Array(rows * V).fill(SENTINEL);
  for (let t = 0; t < rows; t++) {
    const wordRow = t % 2 === 0;
    for (let col = 0; col < V; col++) {
      const shiftTag = vocabulary[col][0] === "l" || vocabulary[col][0] === "r";
      if (shiftTag === wordRow) {
        data[t * V + col] = vocabulary[col] === tags[t] ? 0.0 : -MARGIN;
      }
    }
  }
  return { data, rows, vocabSize: V };
}

describe("bridge vs CLI golden equivalence", () => {
  const fixtures = readFileSync(sampleBank, "utf-8")
    .split("\n")
    .filter((line) => line.length > 0)
    .slice(0, 10);
  const fixtureText = fixtures.join("\n") + "\n";

  let dir: string;
  let cliTagsBytes: string;
  let cliVocab: string[];
  let goldTags: string[][];

  beforeAll(() => {
    dir = mkdtempSync(join(tmpdir(), "tetratag-golden-"));
    const trees = join(dir, "fixture.trees");
    writeFileSync(trees, fixtureText);
    cli([
      "encode", trees,
      "--tags", join(dir, "gold.tags"),
      "--vocab", join(dir, "tags.vocab"),
      "--sentences", join(dir, "gold.sent"),
    ]);
    cliTagsBytes = readFileSync(join(dir, "gold.tags"), "utf-8");
    cliVocab = readFileSync(join(dir, "tags.vocab"), "utf-8")
      .split("\n")
      .filter((line) => line.length > 0);
    goldTags = cliTagsBytes
      .split("\n")
      .filter((line) => line.length > 0)
      .map((line) => line.split(" "));
  });

  afterAll(() => {
    rmSync(dir, { recursive: true, force: true });
  });

  it("encode reproduces the CLI tag file byte-for-byte", () => {
    const session = new BridgeSession();
    const tags = session.encode(fixtureText);
    const rebuilt = tags.map((seq) => seq.join(" ")).join("\n") + "\n";
    expect(rebuilt).toBe(cliTagsBytes);
  });

  it("the session vocabulary equals the CLI vocabulary file", () => {
    const session = new BridgeSession();
    session.encode(fixtureText);
    expect(session.vocab()).toEqual(cliVocab);
  });

  it("tag decoding reproduces CLI output and the original trees", () => {
    const session = new BridgeSession();
    const cliOut = join(dir, "cli-decoded.trees");
    cli([
      "decode",
      "--tags", join(dir, "gold.tags"),
      "--sentences", join(dir, "gold.sent"),
      "--out", cliOut,
    ]);
    const cliLines = readFileSync(cliOut, "utf-8")
      .split("\n")
      .filter((line) => line.length > 0);
    fixtures.forEach((line, i) => {
      const bridged = session.decodeTags(goldTags[i], words(line));
      expect(bridged).toBe(cliLines[i]);
      expect(bridged).toBe(line);
    });
  });

  it("score-grid decoding matches the CLI on the identical binary file", () => {
    const session = new BridgeSession({ vocabulary: cliVocab });
    fixtures.forEach((line, i) => {
      const grid = oneHot(goldTags[i], cliVocab);
      // the very bytes the bridge ships across the boundary
      const blob = encodeScoreFile(cliVocab, grid);
      const scorePath = join(dir, `grid-${i}.scores`);
      const sentPath = join(dir, `grid-${i}.sent`);
      const outPath = join(dir, `grid-${i}.trees`);
      writeFileSync(scorePath, blob);
      writeFileSync(
        sentPath,
        words(line).map(([w, t]) => `${w}/${t}`).join(" ") + "\n",
      );
      cli([
        "decode",
        "--scores", scorePath,
        "--sentences", sentPath,
        "--out", outPath,
        "--max-depth", "8",
      ]);
      const cliLine = readFileSync(outPath, "utf-8").trimEnd();
      const bridged = session.decodeScores(grid, words(line));
      expect(bridged).toBe(cliLine);
      expect(bridged).toBe(line);
    });
  });

  it("binary score files start with the documented magic", () => {
    const grid = oneHot(goldTags[0], cliVocab);
    const blob = encodeScoreFile(cliVocab, grid);
    expect(blob.subarray(0, 4).toString("ascii")).toBe("TTSC");
    expect(blob.readUInt32LE(4)).toBe(1);
  });

  it("propagates primary error messages", () => {
    const session = new BridgeSession();
    expect(() => session.encode("(S (NP")).toThrowError(CliError);
    try {
      session.encode("(S (NP");
    } catch (error) {
      expect(String(error)).toContain("byte offset");
    }
  });

  it("rejects malformed grids before calling the CLI", () => {
    const session = new BridgeSession({ vocabulary: cliVocab });
    const bad: ScoreGrid = { data: new Float64Array(4), rows: 2, vocabSize: 2 };
    expect(() => session.decodeScores(bad, [["a", "A"]])).toThrowError(CliError);
  });
});
