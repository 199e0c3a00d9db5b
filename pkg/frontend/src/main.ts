// Page wiring: parameter form, pattern browser, subgraph view, history.

import { ApiClient, ApiError } from "./api.js";
import { filterRows, patternRows, sortRows, SortKey } from "./browser.js";
import { renderError, renderHistory, renderPatternTable, renderSubgraph } from "./render.js";
import { ExplorationSession, ParameterError } from "./session.js";
import { MiningParameters } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
    const element = document.getElementById(id);
    if (!element) {
        throw new Error(`missing page element #${id}`);
    }
    return element as T;
}

function readParameters(): MiningParameters {
    return {
        engine: (el<HTMLSelectElement>("engine").value as MiningParameters["engine"]),
        measure: el<HTMLSelectElement>("measure").value,
        targets: el<HTMLInputElement>("targets").value,
        k: Number(el<HTMLInputElement>("k").value),
        minSize: Number(el<HTMLInputElement>("min-size").value),
        maxDepth: Number(el<HTMLInputElement>("max-depth").value),
    };
}

export function start(): void {
    const client = new ApiClient("");
    const session = new ExplorationSession(client);
    let sortKey: SortKey = "quality";
    let mining = false;

    const patternsPane = el<HTMLDivElement>("patterns");
    const subgraphPane = el<HTMLDivElement>("subgraph");
    const historyPane = el<HTMLDivElement>("history");
    const statusLine = el<HTMLSpanElement>("status");

    function redraw(): void {
        const entry = session.current;
        renderHistory(
            historyPane,
            session.history.map((h) => ({
                runId: h.runId,
                label: `${h.parameters.engine} k=${h.parameters.k} `
                    + `min=${h.parameters.minSize} depth=${h.parameters.maxDepth}`,
                active: h === entry,
            })),
            (runId) => {
                session.revisit(runId);
                redraw();
            },
        );
        if (!entry) {
            return;
        }
        const needle = el<HTMLInputElement>("filter").value;
        const rows = filterRows(
            sortRows(patternRows(entry.result), sortKey), needle,
        );
        renderPatternTable(patternsPane, rows, (index) => {
            session.selectPattern(index);
            void showMembers(entry.runId, index);
            redraw();
        }, session.selectedPattern);
    }

    async function showMembers(runId: string, index: number): Promise<void> {
        try {
            const view = await client.getMembers(runId, index);
            renderSubgraph(subgraphPane, view, `${runId}/${index}`);
        } catch (err) {
            renderError(subgraphPane, String(err), () => void showMembers(runId, index));
        }
    }

    async function remine(): Promise<void> {
        if (mining) {
            return;  // one active mining request per session
        }
        mining = true;
        statusLine.textContent = "mining...";
        try {
            await session.remine(readParameters());
            statusLine.textContent =
                `run ${session.current!.runId} done, `
                + `${session.current!.result.body.patterns?.length ?? 0} patterns`;
            redraw();
        } catch (err) {
            if (err instanceof ParameterError) {
                statusLine.textContent = `invalid parameters: ${err.message}`;
            } else if (err instanceof ApiError) {
                statusLine.textContent = `server rejected the run: ${err.message}`;
            } else {
                statusLine.textContent = String(err);
            }
        } finally {
            mining = false;
        }
    }

    el<HTMLButtonElement>("mine").addEventListener("click", () => void remine());
    el<HTMLInputElement>("filter").addEventListener("input", redraw);
    el<HTMLSelectElement>("sort").addEventListener("change", (event) => {
        sortKey = (event.target as HTMLSelectElement).value as SortKey;
        redraw();
    });
    void remine();  // initial run with the default parameters
}

if (typeof document !== "undefined" && document.getElementById("mine")) {
    start();
}
