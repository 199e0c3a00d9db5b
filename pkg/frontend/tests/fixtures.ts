// A fetch-compatible fake backend serving captured service responses.
//
// The fixture files under fixtures/ are verbatim bodies recorded from
// the real mining service on a six-actor two-clique bundle, so tests
// exercise the exact JSON the explorer sees in production.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

export function fixtureText(name: string): string {
    return readFileSync(join(FIXTURES, name), "utf-8");
}

export interface BackendOptions {
    pollsUntilDone?: number;  // "running" responses before "done"
}

export interface FakeBackend {
    fetch: (url: string, init?: RequestInit) => Promise<Response>;
    requests: string[];
}

const RUNS: Record<string, string> = {
    "fx-minsize2": "run_minsize2.json",
    "fx-minsize3": "run_minsize3.json",
};

export function fakeBackend(options: BackendOptions = {}): FakeBackend {
    const pollsUntilDone = options.pollsUntilDone ?? 0;
    const pollCounts: Record<string, number> = {};
    const requests: string[] = [];

    function json(status: number, body: string): Response {
        return new Response(body, {
            status,
            headers: { "content-type": "application/json" },
        });
    }

    async function handle(url: string, init?: RequestInit): Promise<Response> {
        requests.push(`${init?.method ?? "GET"} ${url}`);
        if (url.endsWith("/api/graph")) {
            return json(200, fixtureText("graph.json"));
        }
        if (url.endsWith("/api/mine")) {
            const body = JSON.parse(String(init?.body ?? "{}"));
            const parameters = body.parameters ?? {};
            if (body.engine !== "communities") {
                return json(400, JSON.stringify({
                    error: `unknown engine '${body.engine}'`,
                }));
            }
            if ((parameters.k ?? 1) < 1 || (parameters.min_size ?? 1) < 1) {
                return json(400, JSON.stringify({
                    error: "k, min_size and max_depth must all be >= 1",
                }));
            }
            const runId = parameters.min_size >= 3 ? "fx-minsize3" : "fx-minsize2";
            return json(200, JSON.stringify({ run_id: runId }));
        }
        const runMatch = url.match(/\/api\/runs\/([^/]+)$/);
        if (runMatch) {
            const runId = runMatch[1];
            if (!(runId in RUNS)) {
                return json(404, JSON.stringify({ error: `unknown run '${runId}'` }));
            }
            pollCounts[runId] = (pollCounts[runId] ?? 0) + 1;
            if (pollCounts[runId] <= pollsUntilDone) {
                return json(200, JSON.stringify({ run_id: runId, status: "running" }));
            }
            return json(200, fixtureText(RUNS[runId]));
        }
        const membersMatch = url.match(/\/api\/patterns\/([^/]+)\/(\d+)\/members$/);
        if (membersMatch) {
            const index = Number(membersMatch[2]);
            if (membersMatch[1] !== "fx-minsize2" || index > 3) {
                return json(404, JSON.stringify({ error: "pattern index out of range" }));
            }
            return json(200, fixtureText(index === 0 ? "members_0.json"
                                                     : "members_singleton.json"));
        }
        return json(404, JSON.stringify({ error: `no route for ${url}` }));
    }

    return { fetch: handle, requests };
}

export const instantDelay = async (_ms: number): Promise<void> => {};
