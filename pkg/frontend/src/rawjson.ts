// Extraction of literal number tokens from raw JSON text.
//
// The explorer never recomputes or reformats quality values: what the
// service serialized is what gets displayed. JSON.parse would lose the
// original formatting (e.g. "0.03999999999999998" vs a re-rendered
// "0.04"), so the literal token is taken from the response body.

const NUMBER = "-?(?:0|[1-9]\\d*)(?:\\.\\d+)?(?:[eE][+-]?\\d+)?";

/**
 * Literal value tokens of every `"key": <number>` occurrence, in
 * document order. The key must match exactly (a preceding quote
 * boundary keeps e.g. "min_quality" from matching "quality").
 */
export function numberTokens(rawJson: string, key: string): string[] {
    const pattern = new RegExp(`"${key}"\\s*:\\s*(${NUMBER})`, "g");
    const tokens: string[] = [];
    for (const match of rawJson.matchAll(pattern)) {
        tokens.push(match[1]);
    }
    return tokens;
}

/**
 * Quality tokens inside the "patterns" array only, one per pattern.
 * Occurrences outside the array (e.g. a min_quality parameter) are
 * excluded by slicing the patterns section out of the document first.
 */
export function patternQualityTokens(rawJson: string): string[] {
    const start = rawJson.indexOf('"patterns"');
    if (start < 0) {
        return [];
    }
    return numberTokens(rawJson.slice(start), "quality");
}
