/**
 * BIO tag sequences to argument spans.
 *
 * Maximal contiguous runs of one role become one argument; discontiguous
 * occurrences of the same role become separate arguments. A stray I- tag
 * without a preceding B- of the same label opens a new run (lenient reading
 * of slightly malformed model output).
 */

import { CanonicalRole, OtherTagCounter, mapTagToRole } from "./roles.js";

export interface RawSrlFrame {
    verb: string;
    tags: string[]; // one BIO tag per token, e.g. B-ARG0, I-ARG0, B-V, O
}

export interface ArgumentSpan {
    role: CanonicalRole;
    text: string;
    span: [number, number]; // [start, end) token positions
}

interface Run {
    label: string;
    start: number;
    end: number; // exclusive
}

export function bioRuns(tags: string[]): Run[] {
    const runs: Run[] = [];
    let current: Run | null = null;
    tags.forEach((tag, i) => {
        if (tag === "O" || tag === "") {
            current = null;
            return;
        }
        const dash = tag.indexOf("-");
        const marker = dash === -1 ? tag : tag.slice(0, dash);
        const label = dash === -1 ? tag : tag.slice(dash + 1);
        const continues = marker === "I" && current !== null && current.label === label
            && current.end === i;
        if (continues && current !== null) {
            current.end = i + 1;
        } else {
            current = { label, start: i, end: i + 1 };
            runs.push(current);
        }
    });
    return runs;
}

/**
 * Convert one frame's tags to argument spans against `tokens`.
 *
 * Returns null when the frame has no verb run (the frame is dropped). When a
 * model emits several V runs, the first keeps the verb role and later ones
 * demote to "other" so that the one-verb-per-tuple schema invariant holds.
 */
export function frameToArguments(
    frame: RawSrlFrame,
    tokens: string[],
    otherTags?: OtherTagCounter,
): ArgumentSpan[] | null {
    if (frame.tags.length !== tokens.length) {
        throw new Error(
            `tag sequence length ${frame.tags.length} != token count ${tokens.length}`,
        );
    }
    const args: ArgumentSpan[] = [];
    let sawVerb = false;
    for (const run of bioRuns(frame.tags)) {
        let role = mapTagToRole(run.label);
        if (role === "verb") {
            if (sawVerb) {
                role = "other";
            }
            sawVerb = true;
        } else if (role === "other" && otherTags) {
            otherTags.record(run.label);
        }
        args.push({
            role,
            text: tokens.slice(run.start, run.end).join(" "),
            span: [run.start, run.end],
        });
    }
    return sawVerb ? args : null;
}
