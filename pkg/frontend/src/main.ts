/**
 * Browser bootstrap: one active session per tab.
 *
 * The API base URL comes from the `?api=` query parameter, falling back to
 * the page origin.  Keyboard shortcuts: B chooses the bet, L the lottery.
 */

import { ApiClient } from "./api.js";
import { SessionFlow } from "./flow.js";
import { commitmentBanner, render } from "./view.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? window.location.origin;
}

function main(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");

  const api = new ApiClient(apiBase());
  let bannerShown = false;
  const flow = new SessionFlow(api, (state) => {
    render(root, state, {
      onChoose: (choseBet) => void flow.choose(choseBet),
      onRetry: () => void flow.retry(),
    });
    if (state.session && !bannerShown) {
      commitmentBanner(document.body, state.session.commitment);
      bannerShown = true;
    }
  });

  window.addEventListener("keydown", (event) => {
    if (event.key === "b" || event.key === "B") void flow.choose(true);
    if (event.key === "l" || event.key === "L") void flow.choose(false);
  });

  const params = new URLSearchParams(window.location.search);
  void flow.start({
    depth: params.has("depth") ? Number(params.get("depth")) : undefined,
    respondent: params.get("respondent") ?? undefined,
    wave: params.get("wave") ?? undefined,
  });
}

main();
