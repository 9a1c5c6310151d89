/**
 * Bindings for the tetratag toolkit.
 *
 * A session drives the `tetratag` command line through its documented file
 * formats, so every operation here is byte-identical to the corresponding
 * CLI invocation on the same inputs. Score grids cross the boundary as
 * contiguous row-major float64 buffers with (rows, vocabSize) shape
 * metadata, serialized into the binary `TTSC` score format.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface SessionOptions {
  /** Command prefix that runs the CLI (default: ["python3", "-m", "tetratag"]). */
  command?: string[];
  /** Vocabulary indexing score-grid columns (serialized tags, stable order). */
  vocabulary?: string[];
  /** Stack depth cap for score decoding (default 8). */
  maxDepth?: number;
  /** Tie-breaking rule identifier (default "depth-struct-label"). */
  tieBreak?: string;
  /** Label given to a dummy root produced by decoding (default "TOP"). */
  rootLabel?: string;
}

export interface ScoreGrid {
  /** Row-major scores, rows * vocabSize values. */
  data: Float64Array;
  /** 2n-1 rows in position order (word, fencepost, word, ...). */
  rows: number;
  /** Must equal the session vocabulary length. */
  vocabSize: number;
}

/** A word with its preterminal tag. */
export type Word = [word: string, tag: string];

const SCORE_MAGIC = "TTSC";
const SCORE_VERSION = 1;

export class CliError extends Error {}

function run(command: string[], args: string[]): string {
  const [head, ...rest] = command;
  const proc = spawnSync(head, [...rest, ...args], { encoding: "utf-8" });
  if (proc.error) {
    throw new CliError(`failed to launch ${head}: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    // surface the primary's message text unchanged
    throw new CliError(proc.stderr.trim() || `exit status ${proc.status}`);
  }
  return proc.stdout;
}

/** Serialize one score grid into the binary score-file layout. */
export function encodeScoreFile(
  vocabulary: string[],
  grid: ScoreGrid,
  sentenceId = "0",
): Buffer {
  if (grid.vocabSize !== vocabulary.length) {
    throw new CliError(
      `grid vocabSize ${grid.vocabSize} does not match vocabulary length ${vocabulary.length}`,
    );
  }
  if (grid.rows < 1 || grid.rows % 2 === 0) {
    throw new CliError(`grid must have 2n-1 rows, got ${grid.rows}`);
  }
  if (grid.data.length !== grid.rows * grid.vocabSize) {
    throw new CliError(
      `grid data length ${grid.data.length} != rows*vocabSize ${grid.rows * grid.vocabSize}`,
    );
  }
  const chunks: Buffer[] = [];
  const u32 = (value: number) => {
    const b = Buffer.alloc(4);
    b.writeUInt32LE(value);
    chunks.push(b);
  };
  const str = (text: string) => {
    const raw = Buffer.from(text, "utf-8");
    u32(raw.length);
    chunks.push(raw);
  };
  chunks.push(Buffer.from(SCORE_MAGIC, "ascii"));
  u32(SCORE_VERSION);
  u32(vocabulary.length);
  for (const tag of vocabulary) str(tag);
  u32(1); // record count
  str(sentenceId);
  u32((grid.rows + 1) / 2); // n
  const payload = Buffer.alloc(grid.data.length * 8);
  for (let i = 0; i < grid.data.length; i++) {
    payload.writeDoubleLE(grid.data[i], i * 8);
  }
  chunks.push(payload);
  return Buffer.concat(chunks);
}

function formatSentence(words: Word[]): string {
  return words.map(([word, tag]) => `${word}/${tag}`).join(" ");
}

/**
 * One loaded vocabulary plus decoder configuration; not shareable across
 * threads, but any number of sessions may run concurrently.
 */
export class BridgeSession {
  readonly command: string[];
  readonly maxDepth: number;
  readonly tieBreak: string;
  readonly rootLabel: string;
  private vocabulary_: string[];

  constructor(options: SessionOptions = {}) {
    this.command = options.command ?? ["python3", "-m", "tetratag"];
    this.maxDepth = options.maxDepth ?? 8;
    this.tieBreak = options.tieBreak ?? "depth-struct-label";
    this.rootLabel = options.rootLabel ?? "TOP";
    this.vocabulary_ = options.vocabulary ? [...options.vocabulary] : [];
  }

  /** The session vocabulary (copy; the session's own list never mutates). */
  vocab(): string[] {
    return [...this.vocabulary_];
  }

  private scratch<T>(body: (dir: string) => T): T {
    const dir = mkdtempSync(join(tmpdir(), "tetratag-bridge-"));
    try {
      return body(dir);
    } finally {
      rmSync(dir, { recursive: true, force: true });
    }
  }

  /**
   * Encode bracketed trees into tag sequences (one string[] per tree).
   * When the session has no vocabulary yet, the corpus-induced one is
   * loaded into the session.
   */
  encode(treeText: string): string[][] {
    return this.scratch((dir) => {
      const trees = join(dir, "input.trees");
      const tags = join(dir, "out.tags");
      const vocab = join(dir, "out.vocab");
      writeFileSync(trees, treeText.endsWith("\n") ? treeText : treeText + "\n");
      run(this.command, ["encode", trees, "--tags", tags, "--vocab", vocab]);
      const lines = readFileSync(tags, "utf-8").split("\n");
      if (lines[lines.length - 1] === "") lines.pop();
      if (this.vocabulary_.length === 0) {
        this.vocabulary_ = readFileSync(vocab, "utf-8")
          .split("\n")
          .filter((line) => line.length > 0);
      }
      return lines.map((line) => (line.length ? line.split(" ") : []));
    });
  }

  /** Encode a single tree into its tag strings. */
  encodeTree(treeText: string): string[] {
    const all = this.encode(treeText);
    if (all.length !== 1) {
      throw new CliError(`expected one tree, found ${all.length}`);
    }
    return all[0];
  }

  /** Decode one tag sequence over a sentence into bracketed tree text. */
  decodeTags(tags: string[], words: Word[]): string {
    return this.scratch((dir) => {
      const tagsPath = join(dir, "input.tags");
      const sentences = join(dir, "input.sent");
      const out = join(dir, "out.trees");
      writeFileSync(tagsPath, tags.join(" ") + "\n");
      writeFileSync(sentences, formatSentence(words) + "\n");
      run(this.command, [
        "decode",
        "--tags", tagsPath,
        "--sentences", sentences,
        "--out", out,
        "--root-label", this.rootLabel,
      ]);
      return readFileSync(out, "utf-8").trimEnd();
    });
  }

  /**
   * Decode a score grid over the session vocabulary into tree text, via
   * the optimal depth-capped search.
   */
  decodeScores(grid: ScoreGrid, words: Word[]): string {
    if (this.vocabulary_.length === 0) {
      throw new CliError("session has no vocabulary; pass one or encode first");
    }
    const blob = encodeScoreFile(this.vocabulary_, grid);
    return this.scratch((dir) => {
      const scores = join(dir, "input.scores");
      const sentences = join(dir, "input.sent");
      const out = join(dir, "out.trees");
      writeFileSync(scores, blob);
      writeFileSync(sentences, formatSentence(words) + "\n");
      run(this.command, [
        "decode",
        "--scores", scores,
        "--sentences", sentences,
        "--out", out,
        "--max-depth", String(this.maxDepth),
        "--tie-break", this.tieBreak,
        "--root-label", this.rootLabel,
      ]);
      return readFileSync(out, "utf-8").trimEnd();
    });
  }
}
