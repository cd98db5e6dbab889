/**
 * Canonical version-1 SRL document assembly.
 *
 * One document per claim: the claim sentence plus its evidence sentences,
 * each carrying tokens and verb-centered tuples with role-tagged spans.
 */

import { OtherTagCounter } from "./roles.js";
import { ArgumentSpan, RawSrlFrame, frameToArguments } from "./spans.js";

export const SCHEMA_VERSION = 1;

export interface SentenceJson {
    sentence_id: string;
    source_doc: string;
    tokens: string[];
    tuples: {
        tuple_id: string;
        arguments: { role: string; text: string; span: [number, number] }[];
    }[];
}

export interface DocumentJson {
    version: number;
    claim: SentenceJson;
    evidence: SentenceJson[];
}

export interface TaggedSentence {
    tokens: string[];
    frames: RawSrlFrame[];
}

export function buildSentence(
    sentenceId: string,
    sourceDoc: string,
    tagged: TaggedSentence,
    otherTags?: OtherTagCounter,
): SentenceJson {
    const tuples: SentenceJson["tuples"] = [];
    tagged.frames.forEach((frame, fi) => {
        const args: ArgumentSpan[] | null = frameToArguments(frame, tagged.tokens, otherTags);
        if (args === null) {
            return; // frame without a verb run
        }
        tuples.push({
            tuple_id: `t${tuples.length}`,
            arguments: args.map((a) => ({ role: a.role, text: a.text, span: a.span })),
        });
    });
    return {
        sentence_id: sentenceId,
        source_doc: sourceDoc,
        tokens: tagged.tokens,
        tuples,
    };
}

export function buildDocument(
    claim: TaggedSentence,
    evidence: TaggedSentence[],
    otherTags?: OtherTagCounter,
): DocumentJson {
    return {
        version: SCHEMA_VERSION,
        claim: buildSentence("claim:0", "claim", claim, otherTags),
        evidence: evidence.map((tagged, i) =>
            buildSentence(`evidence:${i}`, "evidence", tagged, otherTags),
        ),
    };
}
