/**
 * Mapping from SRL model tags to the canonical roles of the version-1 schema.
 *
 * The mapping is total: every tag the model can emit lands on exactly one
 * canonical role. Core arguments (ARG0..ARG5, plus R-/C- variants) become
 * "argument"; ARGM-LOC and ARGM-TMP keep their location/temporal meaning;
 * every other modifier maps to "other", which downstream graph construction
 * ignores.
 */

export type CanonicalRole = "verb" | "argument" | "location" | "temporal" | "other";

const CORE_ARG = /^(R-|C-)?ARG[0-5]$/;

export function mapTagToRole(tag: string): CanonicalRole {
    if (tag === "V") {
        return "verb";
    }
    if (tag === "ARGM-LOC") {
        return "location";
    }
    if (tag === "ARGM-TMP") {
        return "temporal";
    }
    if (CORE_ARG.test(tag)) {
        return "argument";
    }
    return "other";
}

/** Tally of tags that fell through to "other" (reported on stderr). */
export class OtherTagCounter {
    private counts = new Map<string, number>();

    record(tag: string): void {
        this.counts.set(tag, (this.counts.get(tag) ?? 0) + 1);
    }

    summary(): string[] {
        return [...this.counts.entries()]
            .sort(([a], [b]) => a.localeCompare(b))
            .map(([tag, n]) => `${tag}: ${n}`);
    }

    get size(): number {
        return this.counts.size;
    }
}
