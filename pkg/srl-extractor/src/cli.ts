#!/usr/bin/env node
/**
 * srl-extract: parse claim/evidence texts into the canonical SRL JSON schema.
 *
 * Input:  JSONL, one {"claim": string, "evidence": [string, ...]} per line.
 * Output: one canonical version-1 document per input line, newline-delimited.
 *
 * Exit codes: 0 on success, 1 when the model backend is unavailable or the
 * input is malformed, 2 on bad usage.
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { ModelUnavailableError, makeBackend } from "./backend.js";
import { OtherTagCounter } from "./roles.js";
import { TaggedSentence, buildDocument } from "./schema.js";

interface Args {
    input: string;
    output: string;
    backend: string;
    url?: string;
}

function usage(): never {
    process.stderr.write(
        "usage: srl-extract --in texts.jsonl --out srl.json " +
        "[--backend heuristic|http] [--url http://...]\n",
    );
    process.exit(2);
}

function parseArgs(argv: string[]): Args {
    const args: Partial<Args> = { backend: "heuristic" };
    for (let i = 0; i < argv.length; i++) {
        switch (argv[i]) {
            case "--in":
                args.input = argv[++i];
                break;
            case "--out":
                args.output = argv[++i];
                break;
            case "--backend":
                args.backend = argv[++i];
                break;
            case "--url":
                args.url = argv[++i];
                break;
            case "--help":
            case "-h":
                usage();
                break;
            default:
                process.stderr.write(`unknown argument: ${argv[i]}\n`);
                usage();
        }
    }
    if (!args.input || !args.output) {
        usage();
    }
    return args as Args;
}

async function main(): Promise<void> {
    const args = parseArgs(process.argv.slice(2));
    const backend = makeBackend(args.backend, args.url);
    const otherTags = new OtherTagCounter();

    const lines = readFileSync(args.input, "utf-8")
        .split("\n")
        .map((l) => l.trim())
        .filter((l) => l.length > 0);

    const documents: string[] = [];
    for (const [lineno, line] of lines.entries()) {
        let record: { claim: string; evidence?: string[] };
        try {
            record = JSON.parse(line);
        } catch (err) {
            throw new Error(`line ${lineno + 1}: malformed JSON (${String(err)})`);
        }
        if (typeof record.claim !== "string" || record.claim.length === 0) {
            throw new Error(`line ${lineno + 1}: missing non-empty "claim"`);
        }
        const claim: TaggedSentence = await backend.parse(record.claim);
        const evidence: TaggedSentence[] = [];
        for (const text of record.evidence ?? []) {
            evidence.push(await backend.parse(text));
        }
        documents.push(JSON.stringify(buildDocument(claim, evidence, otherTags)));
    }

    writeFileSync(args.output, documents.join("\n") + "\n", "utf-8");
    if (otherTags.size > 0) {
        process.stderr.write(
            `tags mapped to 'other': ${otherTags.summary().join(", ")}\n`,
        );
    }
    process.stderr.write(`wrote ${documents.length} document(s) to ${args.output}\n`);
}

main().catch((err) => {
    if (err instanceof ModelUnavailableError) {
        process.stderr.write(`error: ${err.message}\n`);
        process.exit(1);
    }
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    process.exit(1);
});
