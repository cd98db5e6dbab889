/**
 * Built-in heuristic SRL backend for offline use.
 *
 * Demo-grade by design: it picks one main verb per sentence (lexicon plus
 * -ed morphology, skipping auxiliaries in favor of their participle), tags
 * the pre-verb span as ARG0, the direct post-verb span as ARG1, and
 * classifies trailing prepositional phrases as ARGM-LOC / ARGM-TMP / ARGM-ADV
 * by preposition and content. For production parses point the CLI at a real
 * model with --backend http.
 */

import { RawSrlFrame } from "./spans.js";

const PUNCT = /^[\p{P}\p{S}]+|[\p{P}\p{S}]+$/gu;

export function tokenizeSentence(text: string): string[] {
    return text
        .split(/\s+/)
        .map((w) => w.replace(PUNCT, ""))
        .filter((w) => w.length > 0);
}

const AUXILIARIES = new Set([
    "is", "are", "was", "were", "be", "been", "being", "has", "have", "had",
]);

const IRREGULAR_VERBS = new Set([
    "began", "built", "came", "fell", "found", "froze", "gave", "grew",
    "held", "kept", "led", "left", "lost", "made", "met", "paid", "ran",
    "rose", "said", "sat", "saw", "sent", "set", "sold", "spent", "stood",
    "took", "told", "went", "won", "wrote", "works", "lies", "stands",
]);

const PARTICIPLE = /(ed|en|wn|rn)$/;

const TEMPORAL_PREPOSITIONS = new Set(["during", "after", "before", "until", "since"]);
const LOCATIVE_PREPOSITIONS = new Set(["in", "at", "on", "near", "inside", "within"]);
const OTHER_PREPOSITIONS = new Set(["to", "from", "with", "by", "for", "into", "across"]);

const MONTHS = new Set([
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december",
]);
const TIME_WORDS = new Set([
    "night", "morning", "evening", "afternoon", "winter", "spring", "summer",
    "autumn", "decades", "years", "months", "weeks", "days", "century",
]);

function isVerbCandidate(word: string): boolean {
    const lower = word.toLowerCase();
    if (AUXILIARIES.has(lower)) {
        return false;
    }
    return IRREGULAR_VERBS.has(lower) || (lower.length > 3 && lower.endsWith("ed"));
}

function findVerbIndex(tokens: string[]): number {
    for (let i = 0; i < tokens.length; i++) {
        const lower = tokens[i].toLowerCase();
        if (AUXILIARIES.has(lower)) {
            const next = tokens[i + 1];
            if (next && PARTICIPLE.test(next.toLowerCase())) {
                return i + 1; // "was born" -> born
            }
            return i; // copula: "X is a country"
        }
        if (isVerbCandidate(tokens[i])) {
            return i;
        }
    }
    return -1;
}

function isTemporalPhrase(words: string[]): boolean {
    return words.some((w) => {
        const lower = w.toLowerCase();
        return /^\d{4}$/.test(lower) || MONTHS.has(lower) || TIME_WORDS.has(lower);
    });
}

function phraseLabel(prep: string, words: string[]): string {
    const lower = prep.toLowerCase();
    if (TEMPORAL_PREPOSITIONS.has(lower)) {
        return "ARGM-TMP";
    }
    if (LOCATIVE_PREPOSITIONS.has(lower)) {
        return isTemporalPhrase(words) ? "ARGM-TMP" : "ARGM-LOC";
    }
    return "ARGM-ADV";
}

function isPreposition(word: string): boolean {
    const lower = word.toLowerCase();
    return TEMPORAL_PREPOSITIONS.has(lower) || LOCATIVE_PREPOSITIONS.has(lower)
        || OTHER_PREPOSITIONS.has(lower);
}

function tagSpan(tags: string[], start: number, end: number, label: string): void {
    for (let i = start; i < end; i++) {
        tags[i] = (i === start ? "B-" : "I-") + label;
    }
}

/** Tag one tokenized sentence; empty result means "no frames". */
export function tagSentence(tokens: string[]): RawSrlFrame[] {
    const verbIndex = findVerbIndex(tokens);
    if (verbIndex === -1) {
        return [];
    }
    const tags = new Array<string>(tokens.length).fill("O");
    tags[verbIndex] = "B-V";
    if (verbIndex > 0) {
        // skip a bare auxiliary directly before the participle
        const stop = AUXILIARIES.has(tokens[verbIndex - 1]?.toLowerCase() ?? "")
            ? verbIndex - 1
            : verbIndex;
        if (stop > 0) {
            tagSpan(tags, 0, stop, "ARG0");
        }
    }
    let i = verbIndex + 1;
    let argStart = -1;
    const flushArg = (end: number) => {
        if (argStart !== -1 && end > argStart) {
            tagSpan(tags, argStart, end, "ARG1");
        }
        argStart = -1;
    };
    while (i < tokens.length) {
        if (isPreposition(tokens[i])) {
            flushArg(i);
            let j = i + 1;
            while (j < tokens.length && !isPreposition(tokens[j])) {
                j++;
            }
            tagSpan(tags, i, j, phraseLabel(tokens[i], tokens.slice(i + 1, j)));
            i = j;
        } else {
            if (argStart === -1) {
                argStart = i;
            }
            i++;
        }
    }
    flushArg(tokens.length);
    return [{ verb: tokens[verbIndex], tags }];
}
