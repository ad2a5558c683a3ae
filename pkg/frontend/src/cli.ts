/** Figure renderer CLI.
 *
 *   render --spec <spec.json>
 *   render --all --in-dir <runs-root> [--out-dir <dir>]
 *
 * A spec file holds {"figure": "...", "inputDir": "...", "output": "..."};
 * --all walks the given directory (a run dir or a directory of run dirs),
 * infers each figure id from the manifest, and writes <figure>.svg.
 */

import { mkdirSync, readdirSync, statSync, writeFileSync, existsSync } from "node:fs";
import { basename, dirname, join, resolve } from "node:path";
import { readFileSync } from "node:fs";

import { FigureSpec, inferFigureId, render } from "./figures.js";

function fail(message: string): never {
  process.stderr.write(JSON.stringify({ error: { message } }) + "\n");
  process.exit(2);
}

interface Args {
  command: string;
  spec?: string;
  all: boolean;
  inDir?: string;
  outDir?: string;
}

function parseArgs(argv: string[]): Args {
  const out: Args = { command: argv[0] ?? "", all: false };
  for (let i = 1; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--spec") out.spec = argv[++i];
    else if (a === "--all") out.all = true;
    else if (a === "--in-dir") out.inDir = argv[++i];
    else if (a === "--out-dir") out.outDir = argv[++i];
    else fail(`unknown argument '${a}'`);
  }
  return out;
}

function isRunDir(dir: string): boolean {
  return (
    existsSync(join(dir, "manifest.json")) ||
    readdirSync(dir).some((f) => f.endsWith(".csv"))
  );
}

function renderAll(inDir: string, outDir: string): string[] {
  const root = resolve(inDir);
  const candidates: string[] = [];
  if (isRunDir(root)) {
    candidates.push(root);
  }
  for (const entry of readdirSync(root).sort()) {
    const p = join(root, entry);
    if (statSync(p).isDirectory() && isRunDir(p)) candidates.push(p);
  }
  if (candidates.length === 0) fail(`no run directories under ${inDir}`);
  const written: string[] = [];
  for (const dir of candidates) {
    const figure = inferFigureId(dir);
    const svg = render({ figure, inputDir: dir, output: "" });
    const name = dir === root ? figure : `${basename(dir)}-${figure}`;
    const target = join(outDir, `${name}.svg`);
    mkdirSync(dirname(target), { recursive: true });
    writeFileSync(target, svg);
    written.push(target);
  }
  return written;
}

export function main(argv: string[]): number {
  const args = parseArgs(argv);
  if (args.command !== "render") {
    fail("usage: render --spec <file> | render --all --in-dir <dir> [--out-dir <dir>]");
  }
  try {
    if (args.spec) {
      const spec = JSON.parse(readFileSync(args.spec, "utf8")) as FigureSpec;
      if (!spec.figure || !spec.inputDir || !spec.output) {
        fail("spec must define figure, inputDir, and output");
      }
      const svg = render(spec);
      mkdirSync(dirname(resolve(spec.output)), { recursive: true });
      writeFileSync(spec.output, svg);
      process.stdout.write(JSON.stringify({ written: [spec.output] }) + "\n");
      return 0;
    }
    if (args.all) {
      if (!args.inDir) fail("--all requires --in-dir");
      const written = renderAll(args.inDir, args.outDir ?? args.inDir);
      process.stdout.write(JSON.stringify({ written }) + "\n");
      return 0;
    }
  } catch (err) {
    fail(err instanceof Error ? err.message : String(err));
  }
  fail("nothing to do: pass --spec or --all");
}

main(process.argv.slice(2));
