/**
 * SRL backends: the built-in heuristic tagger and an HTTP adapter for a
 * real model server that answers {sentence} with {words, verbs: [{verb, tags}]}.
 */

import { RawSrlFrame } from "./spans.js";
import { TaggedSentence } from "./schema.js";
import { tagSentence, tokenizeSentence } from "./tagger.js";

export interface Backend {
    parse(sentence: string): Promise<TaggedSentence>;
}

export class HeuristicBackend implements Backend {
    async parse(sentence: string): Promise<TaggedSentence> {
        const tokens = tokenizeSentence(sentence);
        return { tokens, frames: tagSentence(tokens) };
    }
}

interface ModelResponse {
    words: string[];
    verbs: { verb: string; tags: string[] }[];
}

export class ModelUnavailableError extends Error {}

export class HttpBackend implements Backend {
    constructor(private readonly url: string) {}

    async parse(sentence: string): Promise<TaggedSentence> {
        let response: Response;
        try {
            response = await fetch(this.url, {
                method: "POST",
                headers: { "content-type": "application/json" },
                body: JSON.stringify({ sentence }),
            });
        } catch (err) {
            throw new ModelUnavailableError(
                `SRL model at ${this.url} is unreachable (${String(err)}). ` +
                "Start a labeling server that accepts {sentence} and returns " +
                "{words, verbs: [{verb, tags}]}, or use --backend heuristic.",
            );
        }
        if (!response.ok) {
            throw new ModelUnavailableError(
                `SRL model at ${this.url} answered ${response.status}`,
            );
        }
        const body = (await response.json()) as ModelResponse;
        const frames: RawSrlFrame[] = (body.verbs ?? []).map((v) => ({
            verb: v.verb,
            tags: v.tags,
        }));
        return { tokens: body.words, frames };
    }
}

export function makeBackend(kind: string, url?: string): Backend {
    if (kind === "heuristic") {
        return new HeuristicBackend();
    }
    if (kind === "http") {
        if (!url) {
            throw new Error("--backend http requires --url");
        }
        return new HttpBackend(url);
    }
    throw new Error(`unknown backend ${kind}; expected heuristic or http`);
}
