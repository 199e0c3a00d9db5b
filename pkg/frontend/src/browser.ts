// Pattern list view model: sorting, filtering, display strings.

import { RunResult } from "./api.js";
import { PatternEntry } from "./types.js";

export interface PatternRow {
    index: number;          // position in the service's pattern list
    label: string;          // "team=alpha AND tag=ml"
    size: number;           // member count or support
    quality: number;        // parsed, for sorting only
    qualityText: string;    // literal token from the service JSON
}

export type SortKey = "quality" | "size";

function entrySize(entry: PatternEntry): number {
    return entry.member_count ?? entry.support ?? entry.members?.length ?? 0;
}

export function patternRows(result: RunResult): PatternRow[] {
    const patterns = result.body.patterns ?? [];
    return patterns.map((entry, index) => ({
        index,
        label: entry.selectors.map(([a, v]) => `${a}=${v}`).join(" AND "),
        size: entrySize(entry),
        quality: entry.quality,
        qualityText: result.qualityTokens[index] ?? String(entry.quality),
    }));
}

export function sortRows(
    rows: PatternRow[], key: SortKey = "quality", descending = true,
): PatternRow[] {
    const sorted = [...rows].sort((r1, r2) => {
        const d = key === "quality" ? r1.quality - r2.quality : r1.size - r2.size;
        if (d !== 0) {
            return descending ? -d : d;
        }
        return r1.index - r2.index;  // stable, service order breaks ties
    });
    return sorted;
}

/** Case-insensitive selector substring filter. */
export function filterRows(rows: PatternRow[], needle: string): PatternRow[] {
    const query = needle.trim().toLowerCase();
    if (!query) {
        return rows;
    }
    return rows.filter((r) => r.label.toLowerCase().includes(query));
}
