// Thin typed client for the mining service.

import { GraphResponse, MembersResponse, RunResponse } from "./types.js";
import { patternQualityTokens } from "./rawjson.js";

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
        this.name = "ApiError";
    }
}

export interface RunResult {
    body: RunResponse;
    rawText: string;
    qualityTokens: string[];
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    constructor(
        private baseUrl: string = "",
        private fetchFn: FetchLike = (url, init) => fetch(url, init),
    ) {}

    private async request(path: string, init?: RequestInit): Promise<string> {
        let response: Response;
        try {
            response = await this.fetchFn(this.baseUrl + path, init);
        } catch (err) {
            throw new ApiError(0, `network failure: ${String(err)}`);
        }
        const text = await response.text();
        if (!response.ok) {
            // surface the server's own message verbatim
            let message = text;
            try {
                const parsed = JSON.parse(text);
                if (parsed && typeof parsed.error === "string") {
                    message = parsed.error;
                }
            } catch {
                // non-JSON error body: keep raw text
            }
            throw new ApiError(response.status, message);
        }
        return text;
    }

    async getGraph(): Promise<GraphResponse> {
        return JSON.parse(await this.request("/api/graph"));
    }

    async mine(engine: string, parameters: Record<string, unknown>): Promise<string> {
        const text = await this.request("/api/mine", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ engine, parameters }),
        });
        return (JSON.parse(text) as { run_id: string }).run_id;
    }

    async getRun(runId: string): Promise<RunResult> {
        const rawText = await this.request(`/api/runs/${runId}`);
        return {
            body: JSON.parse(rawText) as RunResponse,
            rawText,
            qualityTokens: patternQualityTokens(rawText),
        };
    }

    async getMembers(runId: string, index: number): Promise<MembersResponse> {
        return JSON.parse(
            await this.request(`/api/patterns/${runId}/${index}/members`),
        );
    }
}
