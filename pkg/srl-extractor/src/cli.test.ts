import assert from "node:assert/strict";
import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { test } from "node:test";

import { buildDocument } from "./schema.js";
import { HeuristicBackend } from "./backend.js";

const CLI = fileURLToPath(new URL("./cli.js", import.meta.url));

function run(args: string[]): { code: number; stderr: string } {
    try {
        execFileSync("node", [CLI, ...args], { stdio: ["ignore", "pipe", "pipe"] });
        return { code: 0, stderr: "" };
    } catch (err: any) {
        return { code: err.status ?? 1, stderr: String(err.stderr ?? "") };
    }
}

test("document builder emits the version-1 shape", async () => {
    const backend = new HeuristicBackend();
    const claim = await backend.parse("Rodney King riots occurred in Los Angeles County.");
    const evidence = [await backend.parse("The bridge collapsed during the night.")];
    const doc = buildDocument(claim, evidence);
    assert.equal(doc.version, 1);
    assert.equal(doc.claim.sentence_id, "claim:0");
    assert.equal(doc.evidence.length, 1);
    for (const tuple of doc.claim.tuples) {
        const verbs = tuple.arguments.filter((a) => a.role === "verb");
        assert.equal(verbs.length, 1);
        for (const a of tuple.arguments) {
            const [s, e] = a.span;
            assert.equal(a.text, doc.claim.tokens.slice(s, e).join(" "));
        }
    }
});

test("cli writes one document per input line", () => {
    const dir = mkdtempSync(join(tmpdir(), "srl-"));
    const input = join(dir, "texts.jsonl");
    const output = join(dir, "srl.json");
    writeFileSync(input, [
        JSON.stringify({ claim: "Marie Curie discovered radium in Paris.",
                         evidence: ["The museum opened a new wing in 2003."] }),
        JSON.stringify({ claim: "Ardalia is a country." }),
    ].join("\n") + "\n");
    const { code } = run(["--in", input, "--out", output]);
    assert.equal(code, 0);
    const lines = readFileSync(output, "utf-8").trim().split("\n");
    assert.equal(lines.length, 2);
    const first = JSON.parse(lines[0]);
    assert.equal(first.version, 1);
    assert.equal(first.evidence.length, 1);
});

test("ten-sentence batch produces dense ids", () => {
    const dir = mkdtempSync(join(tmpdir(), "srl-"));
    const input = join(dir, "texts.jsonl");
    const output = join(dir, "srl.json");
    const evidence = [
        "The committee approved the budget in 2019.",
        "A storm flooded the old harbor in November.",
        "Marie Curie discovered radium in Paris.",
        "The bridge collapsed during the night.",
        "Farmers planted wheat in the northern valley.",
        "The museum opened a new wing in 2003.",
        "An engineer repaired the turbine at the dam.",
        "The orchestra performed a symphony in Vienna.",
        "Wolves returned to the forest after decades.",
    ];
    writeFileSync(input, JSON.stringify({
        claim: "Rodney King riots occurred in Los Angeles County.",
        evidence,
    }) + "\n");
    const { code } = run(["--in", input, "--out", output]);
    assert.equal(code, 0);
    const doc = JSON.parse(readFileSync(output, "utf-8"));
    assert.equal(doc.evidence.length, 9);
    doc.evidence.forEach((s: any, i: number) => {
        assert.equal(s.sentence_id, `evidence:${i}`);
    });
});

test("empty frame result keeps the sentence with no tuples", () => {
    const dir = mkdtempSync(join(tmpdir(), "srl-"));
    const input = join(dir, "texts.jsonl");
    const output = join(dir, "srl.json");
    writeFileSync(input, JSON.stringify({
        claim: "Marie Curie discovered radium in Paris.",
        evidence: ["Blue skies everywhere."],
    }) + "\n");
    assert.equal(run(["--in", input, "--out", output]).code, 0);
    const doc = JSON.parse(readFileSync(output, "utf-8"));
    assert.deepEqual(doc.evidence[0].tuples, []);
});

test("unreachable http backend exits nonzero with a hint", () => {
    const dir = mkdtempSync(join(tmpdir(), "srl-"));
    const input = join(dir, "texts.jsonl");
    writeFileSync(input, JSON.stringify({ claim: "The bridge collapsed." }) + "\n");
    const { code, stderr } = run([
        "--in", input, "--out", join(dir, "out.json"),
        "--backend", "http", "--url", "http://127.0.0.1:9",
    ]);
    assert.notEqual(code, 0);
    assert.match(stderr, /unreachable|answered/);
});

test("bad usage exits 2", () => {
    const { code } = run(["--in", "only-input.jsonl"]);
    assert.equal(code, 2);
});
