/**
 * Entry point: a small hash router over the four screens.
 *
 *   #/questionnaire/<campaignId>/<teacherId>?token=...   anonymous entry
 *   #/dashboard/<teacherId>/<campaignId>                 role-gated results
 *   #/cohort/<campaignId>?grouping=...&name=...          commission view
 *   #/collegial/<evaluationId>                           observation stepper
 *
 * The API base URL defaults to the serving origin and can be overridden by
 * setting window.TEACHEVAL_API before this module loads.
 */

import { ApiClient, ApiError } from "./api.js";
import { loadTeacherDashboard, renderAccessDenied, renderCohortView } from "./dashboard.js";
import { renderCollegialScreen } from "./collegial.js";
import { renderQuestionnaireScreen } from "./questionnaire.js";

declare global {
  interface Window {
    TEACHEVAL_API?: string;
  }
}

const client = new ApiClient(window.TEACHEVAL_API ?? "");

function renderLogin(container: HTMLElement): void {
  container.innerHTML = `
    <form class="login" data-testid="login">
      <h2>Sign in</h2>
      <label>Principal <input name="principal" autocomplete="username"></label>
      <label>Password <input name="password" type="password" autocomplete="current-password"></label>
      <button type="submit">Sign in</button>
      <p class="feedback" data-testid="login-feedback"></p>
    </form>`;
  const form = container.querySelector("form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const feedback = form.querySelector(".feedback") as HTMLElement;
    try {
      const session = await client.login(String(data.get("principal")), String(data.get("password")));
      feedback.textContent = `Signed in as ${session.principal_id} (${session.roles.join(", ")}).`;
      if (session.teacher_id) {
        window.location.hash = `#/dashboard/${session.teacher_id}/`;
      }
    } catch (error) {
      feedback.textContent = error instanceof ApiError ? error.message : String(error);
    }
  });
}

async function route(): Promise<void> {
  const container = document.getElementById("app");
  if (!container) {
    return;
  }
  const [hashPath, hashQuery] = window.location.hash.replace(/^#\/?/, "").split("?");
  const parts = (hashPath ?? "").split("/").filter(Boolean);
  const query = new URLSearchParams(hashQuery ?? "");

  try {
    switch (parts[0]) {
      case "questionnaire": {
        const [, campaignId, teacherId] = parts;
        if (!campaignId || !teacherId) {
          break;
        }
        const questionnaire = await client.getQuestionnaire(campaignId);
        renderQuestionnaireScreen({
          container,
          client,
          questionnaire,
          campaignId,
          teacherId,
          token: query.get("token") ?? "",
        });
        return;
      }
      case "dashboard": {
        const [, teacherId, campaignId] = parts;
        if (!teacherId || !campaignId) {
          break;
        }
        await loadTeacherDashboard(client, container, teacherId, campaignId);
        return;
      }
      case "cohort": {
        const [, campaignId] = parts;
        if (!campaignId) {
          break;
        }
        const stats = await client.getStatistics(
          campaignId, query.get("grouping") ?? "university", query.get("name") ?? undefined);
        renderCohortView(container, stats);
        return;
      }
      case "collegial": {
        const [, evaluationId] = parts;
        if (!evaluationId) {
          break;
        }
        const record = await client.getCollegial(evaluationId);
        renderCollegialScreen({ container, client, record });
        return;
      }
    }
    renderLogin(container);
  } catch (error) {
    if (error instanceof ApiError && error.code === "Denied") {
      renderAccessDenied(container, error);
      return;
    }
    container.innerHTML = "";
    const failure = document.createElement("p");
    failure.className = "error";
    failure.textContent = error instanceof Error ? error.message : String(error);
    container.append(failure);
  }
}

window.addEventListener("hashchange", () => void route());
void route();
