// Exploration session state: the iterative mine -> browse -> adjust loop.

import { ApiClient, RunResult } from "./api.js";
import { DEFAULT_PARAMETERS, MiningParameters } from "./types.js";

export interface HistoryEntry {
    runId: string;
    parameters: MiningParameters;
    result: RunResult;
}

export type Delay = (ms: number) => Promise<void>;

const realDelay: Delay = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export class ParameterError extends Error {
    constructor(public problems: string[]) {
        super(problems.join("; "));
        this.name = "ParameterError";
    }
}

export class MiningFailed extends Error {
    constructor(message: string) {
        super(message);
        this.name = "MiningFailed";
    }
}

/** Client-side validation; the server re-validates on its side. */
export function validateParameters(p: MiningParameters): string[] {
    const problems: string[] = [];
    if (!Number.isInteger(p.k) || p.k < 1) {
        problems.push("k must be an integer >= 1");
    }
    if (!Number.isInteger(p.minSize) || p.minSize < 1) {
        problems.push("min size must be an integer >= 1");
    }
    if (!Number.isInteger(p.maxDepth) || p.maxDepth < 1) {
        problems.push("max depth must be an integer >= 1");
    }
    if (p.engine === "emm" && p.measure !== "frequency" && !p.targets.trim()) {
        problems.push("EMM models other than frequency need target columns");
    }
    return problems;
}

export function toRequestParameters(p: MiningParameters): Record<string, unknown> {
    if (p.engine === "communities") {
        return {
            measure: p.measure,
            k: p.k,
            min_size: p.minSize,
            max_depth: p.maxDepth,
        };
    }
    return {
        model: p.measure,
        targets: p.targets,
        top_k: p.k,
        min_support: p.minSize,
        max_depth: p.maxDepth,
    };
}

export class ExplorationSession {
    readonly history: HistoryEntry[] = [];  // append-only
    parameters: MiningParameters = { ...DEFAULT_PARAMETERS };
    current: HistoryEntry | null = null;
    selectedPattern: number | null = null;
    pollIntervalMs = 1000;

    constructor(private client: ApiClient, private delay: Delay = realDelay) {}

    /** Submit a mining run, poll until it finishes, switch to its result. */
    async remine(edits: Partial<MiningParameters> = {}): Promise<HistoryEntry> {
        const parameters = { ...this.parameters, ...edits };
        const problems = validateParameters(parameters);
        if (problems.length > 0) {
            throw new ParameterError(problems);
        }
        const runId = await this.client.mine(
            parameters.engine, toRequestParameters(parameters),
        );
        for (;;) {
            const result = await this.client.getRun(runId);
            if (result.body.status === "done") {
                const entry: HistoryEntry = { runId, parameters, result };
                this.history.push(entry);
                this.current = entry;
                this.selectedPattern = null;
                this.parameters = parameters;
                return entry;
            }
            if (result.body.status === "failed") {
                throw new MiningFailed(result.body.error ?? "mining failed");
            }
            await this.delay(this.pollIntervalMs);
        }
    }

    /** Revisit a completed run from the history without re-fetching. */
    revisit(runId: string): HistoryEntry {
        const entry = this.history.find((e) => e.runId === runId);
        if (!entry) {
            throw new Error(`run ${runId} not in session history`);
        }
        this.current = entry;
        this.selectedPattern = null;
        return entry;
    }

    selectPattern(index: number): void {
        const patterns = this.current?.result.body.patterns;
        if (!patterns || index < 0 || index >= patterns.length) {
            throw new Error(`pattern index ${index} not in the current run`);
        }
        this.selectedPattern = index;
    }
}
